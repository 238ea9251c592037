#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bianchi {

/// Indices into the coordinate list (s, t, x, y, z); s is the curve parameter.
enum Coord : int { kS = 0, kT = 1, kX = 2, kY = 3, kZ = 4 };

constexpr int kNumCoords = 5;
constexpr int kNumParameters = 11; // a1..a9, a, b
constexpr int kNumUnknowns = 6;    // mu, tau, xi, eta, phi, f

/// One indivisible symbol of the expression language.
///
/// Atoms are ordered by a fixed total order used everywhere canonical forms
/// are built:
///
///   a1 < ... < a9 < a < b
///     < A < A' < A'' < ... < B < ... < C < ...
///     < s < t < x < y < z
///     < mu < ... < f and their partial-derivative symbols
///     < td < xd < yd < zd < tdd < xdd < ydd < zdd.
///
/// The whole order is realized as an integer comparison on a packed code.
class Atom {
public:
  /// Kind order doubles as print order inside a monomial: constants and
  /// coefficient functions first, then coordinates and unknowns, velocities
  /// and accelerations last, matching the usual written order.
  enum class Kind : uint8_t {
    Parameter = 0,    // a1..a9, a, b
    MetricFn = 1,     // A(t), B(t), C(t) and their t-derivatives
    Coordinate = 2,   // s t x y z
    UnknownFn = 3,    // opaque scalar functions of (s,t,x,y,z) and partials
    Velocity = 4,     // td xd yd zd (d/ds of t,x,y,z)
    Acceleration = 5, // tdd xdd ydd zdd
  };

  static Atom coordinate(int c) {
    check(c >= 0 && c < kNumCoords, "coordinate index");
    return Atom(pack(Kind::Coordinate, static_cast<uint32_t>(c)));
  }
  /// Velocity of coordinate c; only t,x,y,z move along the curve.
  static Atom velocity(int c) {
    check(c >= kT && c <= kZ, "velocity index");
    return Atom(pack(Kind::Velocity, static_cast<uint32_t>(c)));
  }
  static Atom acceleration(int c) {
    check(c >= kT && c <= kZ, "acceleration index");
    return Atom(pack(Kind::Acceleration, static_cast<uint32_t>(c)));
  }
  /// which: 0 = A, 1 = B, 2 = C; order = number of t-derivatives.
  static Atom metric_fn(int which, int order = 0) {
    check(which >= 0 && which < 3, "metric function index");
    check(order >= 0 && order < (1 << 12), "metric derivative order");
    return Atom(pack(Kind::MetricFn, (static_cast<uint32_t>(which) << 12) |
                                         static_cast<uint32_t>(order)));
  }
  /// idx: 0..8 -> a1..a9, 9 -> a, 10 -> b.
  static Atom parameter(int idx) {
    check(idx >= 0 && idx < kNumParameters, "parameter index");
    return Atom(pack(Kind::Parameter, static_cast<uint32_t>(idx)));
  }
  /// which: 0..5 -> mu, tau, xi, eta, phi, f; partials counts per coordinate.
  static Atom unknown_fn(int which, std::array<uint8_t, 5> partials = {}) {
    check(which >= 0 && which < kNumUnknowns, "unknown function index");
    uint32_t payload = static_cast<uint32_t>(which) << 20;
    for (int c = 0; c < kNumCoords; ++c) {
      check(partials[static_cast<size_t>(c)] < 16, "partial order");
      payload |= static_cast<uint32_t>(partials[static_cast<size_t>(c)])
                 << (4 * (4 - c));
    }
    return Atom(pack(Kind::UnknownFn, payload));
  }

  Kind kind() const { return static_cast<Kind>(code_ >> 28); }

  /// Coordinate index, metric-function index, parameter index or unknown
  /// index, depending on kind.
  int index() const {
    switch (kind()) {
    case Kind::MetricFn:
      return static_cast<int>((code_ >> 12) & 0x3u);
    case Kind::UnknownFn:
      return static_cast<int>((code_ >> 20) & 0x7u);
    default:
      return static_cast<int>(code_ & 0x0fffffffu);
    }
  }

  /// Number of t-derivatives of a metric function; 0 for other kinds.
  int order() const {
    return kind() == Kind::MetricFn ? static_cast<int>(code_ & 0xfffu) : 0;
  }

  /// Per-coordinate partial counts of an unknown-function symbol.
  std::array<uint8_t, 5> partials() const {
    std::array<uint8_t, 5> p{};
    if (kind() == Kind::UnknownFn)
      for (int c = 0; c < kNumCoords; ++c)
        p[static_cast<size_t>(c)] =
            static_cast<uint8_t>((code_ >> (4 * (4 - c))) & 0xfu);
    return p;
  }

  bool is_coordinate() const { return kind() == Kind::Coordinate; }
  bool is_velocity() const { return kind() == Kind::Velocity; }
  bool is_acceleration() const { return kind() == Kind::Acceleration; }
  bool is_metric_fn() const { return kind() == Kind::MetricFn; }
  bool is_parameter() const { return kind() == Kind::Parameter; }
  bool is_unknown_fn() const { return kind() == Kind::UnknownFn; }

  /// Atom produced by d/d(coordinate c) via the chain rule, for symbols that
  /// are functions of the coordinates (metric functions depend on t, unknown
  /// functions on all five coordinates). nullopt when the symbol does not
  /// depend on coordinate c.
  std::optional<Atom> chain_derivative(int c) const {
    if (kind() == Kind::MetricFn && c == kT)
      return metric_fn(index(), order() + 1);
    if (kind() == Kind::UnknownFn) {
      auto p = partials();
      p[static_cast<size_t>(c)] = static_cast<uint8_t>(p[static_cast<size_t>(c)] + 1);
      return unknown_fn(index(), p);
    }
    return std::nullopt;
  }

  std::string name() const {
    static const char *coord_names[] = {"s", "t", "x", "y", "z"};
    static const char *vel_names[] = {"td", "xd", "yd", "zd"};
    static const char *acc_names[] = {"tdd", "xdd", "ydd", "zdd"};
    static const char *fn_names[] = {"A", "B", "C"};
    static const char *unknown_names[] = {"mu", "tau", "xi", "eta", "phi", "f"};
    switch (kind()) {
    case Kind::Coordinate:
      return coord_names[index()];
    case Kind::Velocity:
      return vel_names[index() - 1];
    case Kind::Acceleration:
      return acc_names[index() - 1];
    case Kind::MetricFn: {
      std::string s = fn_names[index()];
      s.append(static_cast<size_t>(order()), '\'');
      s += "(t)";
      return s;
    }
    case Kind::Parameter: {
      const int idx = index();
      if (idx < 9)
        return std::string("a") + static_cast<char>('1' + idx);
      return idx == 9 ? "a" : "b";
    }
    case Kind::UnknownFn: {
      std::string s = unknown_names[index()];
      const auto p = partials();
      bool any = false;
      for (int c = 0; c < kNumCoords; ++c)
        any = any || p[static_cast<size_t>(c)] != 0;
      if (any) {
        s += "_";
        for (int c = 0; c < kNumCoords; ++c)
          s.append(p[static_cast<size_t>(c)], coord_names[c][0]);
      }
      return s;
    }
    }
    return "?";
  }

  uint32_t code() const { return code_; }

  friend bool operator==(Atom a, Atom b) { return a.code_ == b.code_; }
  friend std::strong_ordering operator<=>(Atom a, Atom b) {
    return a.code_ <=> b.code_;
  }

private:
  explicit Atom(uint32_t code) : code_(code) {}
  static uint32_t pack(Kind k, uint32_t payload) {
    return (static_cast<uint32_t>(k) << 28) | payload;
  }
  static void check(bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(std::string("Atom: bad ") + what);
  }

  uint32_t code_;
};

} // namespace bianchi
