#include "solenoid/coding.hpp"

#include <cmath>

#include "solenoid/errors.hpp"

namespace solenoid {

std::string Word::str() const {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) out.push_back(s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + s - 10));
  return out;
}

Word Word::parse(std::string_view digits, Direction dir, int d) {
  Word w;
  w.direction = dir;
  w.symbols.reserve(digits.size());
  for (char c : digits) {
    int v = -1;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'z') v = c - 'a' + 10;
    if (v < 0 || v >= d) throw ParseError(std::string("word symbol '") + c + "' is not a digit below d");
    w.symbols.push_back(static_cast<Symbol>(v));
  }
  return w;
}

std::uint64_t word_index(std::span<const Symbol> symbols, int d) {
  std::uint64_t idx = 0;
  for (Symbol s : symbols) idx = idx * static_cast<std::uint64_t>(d) + s;
  return idx;
}

Word word_at(std::uint64_t index, int n, int d, Direction dir) {
  Word w;
  w.direction = dir;
  w.symbols.resize(n);
  for (int k = n - 1; k >= 0; --k) {
    w.symbols[k] = static_cast<Symbol>(index % d);
    index /= d;
  }
  return w;
}

std::uint64_t checked_word_count(int d, int n, std::uint64_t cap) {
  if (n < 0) throw PreconditionError("generation must be non-negative");
  std::uint64_t count = 1;
  for (int k = 0; k < n; ++k) {
    if (count > cap / static_cast<std::uint64_t>(d)) {
      throw CapExceeded("d^n = " + std::to_string(d) + "^" + std::to_string(n) + " exceeds enumeration cap " +
                        std::to_string(cap));
    }
    count *= d;
  }
  if (count > cap) throw CapExceeded("word count exceeds enumeration cap " + std::to_string(cap));
  return count;
}

LeafPointResult leaf_point(const Solenoid& sol, std::span<const Symbol> past, double x_lift) {
  const std::size_t n = past.size();
  std::vector<double> lifts(n + 1);
  lifts[0] = x_lift;
  for (std::size_t k = 0; k < n; ++k) lifts[k + 1] = sol.inverse_lift(lifts[k] + kTwoPi * past[k]);
  double y = 0.0;
  double z = 0.0;
  for (std::size_t k = n; k >= 1; --k) {
    const double x = lifts[k];
    const double ny = sol.fiber_y(x, y);
    z = sol.fiber_z(x, y, z);
    y = ny;
  }
  return {{wrap_angle(x_lift), y, z}, std::pow(sol.bounds().fiber_contraction, static_cast<double>(n))};
}

LeafPointResult point_from_backward_word(const Solenoid& sol, const Word& w, double x, double tol) {
  if (w.direction != Direction::backward) throw PreconditionError("point_from_backward_word needs a backward word");
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  for (Symbol s : w.symbols)
    if (s >= sol.degree()) throw PreconditionError("word symbol out of range");
  const double bound = std::pow(sol.bounds().fiber_contraction, static_cast<double>(w.generation()));
  if (!(bound < tol)) {
    throw WordTooShort("word of length " + std::to_string(w.generation()) + " cannot reach tolerance " +
                       std::to_string(tol) + " (need " + std::to_string(coding_depth(sol, tol)) + ")");
  }
  return leaf_point(sol, w.symbols, x);
}

int coding_depth(const Solenoid& sol, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const double k = sol.bounds().fiber_contraction;
  if (k <= 0.0) return 1;
  if (k >= 1.0) throw SpecInvalid("λ′ < 1", "fiber map is not a contraction");
  int n = std::max(0, static_cast<int>(std::floor(std::log(tol) / std::log(k))));
  while (!(std::pow(k, n) < tol)) ++n;
  return n;
}

Word base_itinerary(const Solenoid& sol, double x, int n) {
  if (n < 1) throw PreconditionError("base_itinerary: n must be at least 1");
  Word w;
  w.direction = Direction::forward;
  w.symbols.reserve(n);
  x = wrap_angle(x);
  for (int k = 0; k < n; ++k) {
    w.symbols.push_back(static_cast<Symbol>(sol.branch_of(x)));
    x = sol.eta(x);
  }
  return w;
}

std::vector<Word> enumerate_cylinders(const Solenoid& sol, int n, Direction dir, std::uint64_t cap) {
  const std::uint64_t count = checked_word_count(sol.degree(), n, cap);
  std::vector<Word> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(word_at(i, n, sol.degree(), dir));
  return out;
}

std::pair<double, double> cylinder_base_interval(const Solenoid& sol, const Word& w) {
  if (w.direction != Direction::forward) throw PreconditionError("cylinder_base_interval needs a forward word");
  double lo = 0.0;
  double hi = kTwoPi;
  for (std::size_t k = w.generation(); k-- > 0;) {
    if (w.symbols[k] >= sol.degree()) throw PreconditionError("word symbol out of range");
    const double shift = kTwoPi * w.symbols[k];
    lo = sol.inverse_lift(lo + shift);
    hi = sol.inverse_lift(hi + shift);
  }
  return {lo, hi};
}

std::vector<Symbol> rebase_past(std::span<const Symbol> past, long turns, int d) {
  std::vector<Symbol> out(past.begin(), past.end());
  long carry = turns;
  for (auto& s : out) {
    if (carry == 0) break;
    const long v = static_cast<long>(s) + carry;
    long q = v / d;
    long r = v % d;
    if (r < 0) {
      r += d;
      q -= 1;
    }
    s = static_cast<Symbol>(r);
    carry = q;
  }
  return out;
}

}  // namespace solenoid
