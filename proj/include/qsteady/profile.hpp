#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qsteady/types.hpp"

namespace qsteady {

// ---------------------------------------------------------------------------
// TrigProfile: c + sum_k a_k cos(w_k t + phi_k), canonical form with strictly
// increasing positive frequencies. Closed under derivative and product, which
// keeps the adjoint ladder exact.
// ---------------------------------------------------------------------------

struct TrigTerm {
  double amplitude = 0.0;
  double frequency = 0.0;  // > 0 after canonicalization
  double phase = 0.0;
};

class TrigProfile {
 public:
  TrigProfile() = default;
  static TrigProfile constant(double c);
  static TrigProfile cosine(double amplitude, double frequency, double phase = 0.0);

  double operator()(double t) const;
  TrigProfile derivative() const;

  TrigProfile& operator+=(const TrigProfile& other);
  friend TrigProfile operator+(TrigProfile a, const TrigProfile& b) { return a += b; }
  friend TrigProfile operator*(const TrigProfile& a, const TrigProfile& b);
  TrigProfile& operator*=(double s);
  friend TrigProfile operator*(double s, TrigProfile p) { return p *= s; }

  double constant_part() const { return constant_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const;
  // Largest period 2*pi/w_min among oscillating terms; 0 if constant.
  double longest_period() const;

 private:
  void canonicalize();

  double constant_ = 0.0;
  std::vector<TrigTerm> terms_;
};

// True iff the Gram matrix of the profiles, sampled densely over a common
// quasi-period window, has full rank.
bool linearly_independent(const std::vector<TrigProfile>& profiles);

// ---------------------------------------------------------------------------
// PiecewiseProfile: symbol word on cells of fixed length, one value per
// symbol, optional moving-average coarse-graining of width a (closed-form
// from segment overlaps). Explicit words repeat periodically; Fibonacci
// words are finite truncations and evaluation past the horizon throws.
// ---------------------------------------------------------------------------

// F_1 = "0", F_2 = "01", F_n = F_{n-1} + F_{n-2}; n = 20 gives 10946 symbols.
std::vector<uint8_t> fibonacci_word(int n);

class PiecewiseProfile {
 public:
  PiecewiseProfile(double cell, std::vector<uint8_t> word,
                   std::vector<double> values_per_symbol, bool periodic_word,
                   double coarse_width = 0.0, bool sqrt_of_average = false);

  static PiecewiseProfile from_word(double cell, std::vector<uint8_t> word,
                                    std::vector<double> values, double coarse_width = 0.0);
  static PiecewiseProfile fibonacci(double cell, std::vector<double> values,
                                    int truncation = 20, double coarse_width = 0.0);

  double operator()(double t) const;
  double cell() const { return cell_; }
  double coarse_width() const { return coarse_width_; }
  bool sqrt_of_average() const { return sqrt_of_average_; }
  bool periodic_word() const { return periodic_; }
  std::size_t word_length() const { return word_.size(); }
  // Largest value over the symbol set (after sqrt if applicable).
  double max_value() const;

  // Output profile with sqrt applied after coarse-graining; used for jump
  // envelopes whose squared value must equal the coarse-grained rate.
  PiecewiseProfile sqrt_envelope() const;

  // Times in (t0, t1) where the profile is non-smooth.
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  double raw_value(double t) const;
  double averaged_value(double t) const;

  double cell_;
  std::vector<uint8_t> word_;
  std::vector<double> values_;
  bool periodic_;
  double coarse_width_;
  bool sqrt_of_average_;
};

// ---------------------------------------------------------------------------
// ExpProfile: a * exp(rate * t). Needed for the decaying-dissipation model;
// quasiperiodic only when rate == 0.
// ---------------------------------------------------------------------------

struct ExpProfile {
  double amplitude = 0.0;
  double rate = 0.0;

  double operator()(double t) const { return amplitude * std::exp(rate * t); }
};

// ---------------------------------------------------------------------------

class Profile {
 public:
  Profile() : value_(TrigProfile{}) {}
  Profile(TrigProfile p) : value_(std::move(p)) {}
  Profile(PiecewiseProfile p) : value_(std::move(p)) {}
  Profile(ExpProfile p) : value_(p) {}

  double operator()(double t) const;

  bool is_trig() const { return std::holds_alternative<TrigProfile>(value_); }
  bool is_piecewise() const { return std::holds_alternative<PiecewiseProfile>(value_); }
  bool is_exp() const { return std::holds_alternative<ExpProfile>(value_); }
  bool is_constant() const;

  // Bounded with recurrent structure (Condition-type property): trig and
  // piecewise profiles qualify; exponential ones only at rate zero.
  bool quasiperiodic() const;

  const TrigProfile& trig() const { return std::get<TrigProfile>(value_); }
  const PiecewiseProfile& piecewise() const { return std::get<PiecewiseProfile>(value_); }
  const ExpProfile& exp_profile() const { return std::get<ExpProfile>(value_); }

  double longest_period() const;  // 0 when no oscillating part
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  std::variant<TrigProfile, PiecewiseProfile, ExpProfile> value_;
};

}  // namespace qsteady
