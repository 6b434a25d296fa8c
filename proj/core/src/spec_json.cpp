#include <array>
#include <cstdio>
#include <string_view>

#include "solenoid/config.hpp"
#include "solenoid/errors.hpp"

namespace solenoid {

namespace {

constexpr std::array<std::string_view, 10> kSpecFields{"d",   "eta_eps", "lam0", "lam1",  "lam2",
                                                        "nu0", "nu1",     "nu2",  "u_amp", "v_amp"};

double real_field(const nlohmann::json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("spec: missing field \"") + name + "\"");
  if (!it->is_number()) throw ParseError(std::string("spec: field \"") + name + "\" must be a number");
  return it->get<double>();
}

}  // namespace

nlohmann::json spec_to_json(const SolenoidSpec& s) {
  return nlohmann::json{{"d", s.d},       {"eta_eps", s.eta_eps}, {"lam0", s.lam0}, {"lam1", s.lam1},
                        {"lam2", s.lam2}, {"nu0", s.nu0},         {"nu1", s.nu1},   {"nu2", s.nu2},
                        {"u_amp", s.u_amp}, {"v_amp", s.v_amp}};
}

SolenoidSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("spec: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto f : kSpecFields) known = known || key == f;
    if (!known) throw ParseError("spec: unknown field \"" + key + "\"");
  }
  SolenoidSpec s;
  const auto d = j.find("d");
  if (d == j.end()) throw ParseError("spec: missing field \"d\"");
  if (!d->is_number_integer()) throw ParseError("spec: field \"d\" must be an integer");
  s.d = d->get<int>();
  s.eta_eps = real_field(j, "eta_eps");
  s.lam0 = real_field(j, "lam0");
  s.lam1 = real_field(j, "lam1");
  s.lam2 = real_field(j, "lam2");
  s.nu0 = real_field(j, "nu0");
  s.nu1 = real_field(j, "nu1");
  s.nu2 = real_field(j, "nu2");
  s.u_amp = real_field(j, "u_amp");
  s.v_amp = real_field(j, "v_amp");
  return s;
}

std::string spec_hash(const SolenoidSpec& spec) {
  const std::string canonical = spec_to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace solenoid
