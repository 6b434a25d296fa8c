#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "solenoid/solenoid_map.hpp"

namespace solenoid {

using Symbol = std::uint8_t;

enum class Direction { backward, forward };

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// Finite symbol sequence.
//   backward: symbols[0] is the branch of x_{-1}, symbols[1] of x_{-2}, ...
//             (most recent past first)
//   forward:  symbols[0] is the branch of x itself, symbols[1] of eta(x), ...
struct Word {
  std::vector<Symbol> symbols;
  Direction direction = Direction::backward;

  std::size_t generation() const { return symbols.size(); }
  std::span<const Symbol> view() const { return symbols; }
  // Digit string, e.g. "01101"; symbols >= 10 use letters.
  std::string str() const;
  static Word parse(std::string_view digits, Direction dir, int d);
  bool operator==(const Word&) const = default;
};

// Position of a length-n word in lexicographic order (symbols[0] most
// significant) and the inverse map.
std::uint64_t word_index(std::span<const Symbol> symbols, int d);
Word word_at(std::uint64_t index, int n, int d, Direction dir);

// d^n, or throws CapExceeded when it is above `cap`.
std::uint64_t checked_word_count(int d, int n, std::uint64_t cap);

struct LeafPointResult {
  Point3 point;
  double error_bound = 0.0;
};

// Point over lift x_lift whose past follows `past`, pushed forward from the
// disc centre above the deepest preimage. No tolerance check; the distance to
// the true leaf point is at most fiber_contraction^|past|. The x-coordinate
// of the result is wrap_angle(x_lift).
LeafPointResult leaf_point(const Solenoid& sol, std::span<const Symbol> past, double x_lift);

// Coding map on a finite past. Throws WordTooShort unless
// fiber_contraction^|w| < tol.
LeafPointResult point_from_backward_word(const Solenoid& sol, const Word& w, double x, double tol);

// Smallest length whose coding error is below tol.
int coding_depth(const Solenoid& sol, double tol);

// Forward itinerary of x; symbol k is the branch of eta^k(x).
Word base_itinerary(const Solenoid& sol, double x, int n);

// All d^n words in lexicographic order.
std::vector<Word> enumerate_cylinders(const Solenoid& sol, int n, Direction dir,
                                      std::uint64_t cap = kDefaultEnumerationCap);

// Base interval of a forward (vertical) cylinder.
std::pair<double, double> cylinder_base_interval(const Solenoid& sol, const Word& w);

// Rewrites a past so that leaf_point(rebased, X) == leaf_point(past, X + 2pi*turns),
// carrying through the d-adic digits. Length is preserved; a carry out of the
// last digit is a whole turn of the deepest lift and disappears mod 2pi.
std::vector<Symbol> rebase_past(std::span<const Symbol> past, long turns, int d);

}  // namespace solenoid
