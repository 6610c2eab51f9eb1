#include "qsteady/profile.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsteady {

namespace {
constexpr double kAmplitudeFloor = 1e-15;
}

TrigProfile TrigProfile::constant(double c) {
  TrigProfile p;
  p.constant_ = c;
  return p;
}

TrigProfile TrigProfile::cosine(double amplitude, double frequency, double phase) {
  TrigProfile p;
  p.terms_.push_back({amplitude, frequency, phase});
  p.canonicalize();
  return p;
}

double TrigProfile::operator()(double t) const {
  double v = constant_;
  for (const auto& term : terms_) {
    v += term.amplitude * std::cos(term.frequency * t + term.phase);
  }
  return v;
}

TrigProfile TrigProfile::derivative() const {
  TrigProfile out;
  for (const auto& term : terms_) {
    // d/dt a cos(wt+phi) = a w cos(wt+phi+pi/2)
    out.terms_.push_back({term.amplitude * term.frequency, term.frequency,
                          term.phase + std::numbers::pi / 2});
  }
  out.canonicalize();
  return out;
}

TrigProfile& TrigProfile::operator+=(const TrigProfile& other) {
  constant_ += other.constant_;
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

TrigProfile& TrigProfile::operator*=(double s) {
  constant_ *= s;
  for (auto& term : terms_) term.amplitude *= s;
  canonicalize();
  return *this;
}

TrigProfile operator*(const TrigProfile& a, const TrigProfile& b) {
  TrigProfile out;
  out.constant_ = a.constant_ * b.constant_;
  for (const auto& t : b.terms_) {
    out.terms_.push_back({a.constant_ * t.amplitude, t.frequency, t.phase});
  }
  for (const auto& t : a.terms_) {
    out.terms_.push_back({b.constant_ * t.amplitude, t.frequency, t.phase});
  }
  // cos(x) cos(y) = [cos(x-y) + cos(x+y)] / 2
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      const double amp = 0.5 * ta.amplitude * tb.amplitude;
      out.terms_.push_back({amp, ta.frequency - tb.frequency, ta.phase - tb.phase});
      out.terms_.push_back({amp, ta.frequency + tb.frequency, ta.phase + tb.phase});
    }
  }
  out.canonicalize();
  return out;
}

bool TrigProfile::is_zero() const {
  return terms_.empty() && constant_ == 0.0;
}

double TrigProfile::longest_period() const {
  if (terms_.empty()) return 0.0;
  return 2.0 * std::numbers::pi / terms_.front().frequency;
}

void TrigProfile::canonicalize() {
  const double freq_tol = tolerances().freq_merge_rel;
  double max_freq = 0.0;
  for (const auto& t : terms_) max_freq = std::max(max_freq, std::abs(t.frequency));
  const double freq_eps = freq_tol * std::max(max_freq, 1.0);

  // Normalize to nonnegative frequency: cos(-wt+phi) = cos(wt-phi).
  // Phasor per frequency: a cos(wt+phi) <-> a e^{i phi}.
  std::vector<std::pair<double, Complex>> phasors;  // (frequency, a e^{i phi})
  double c = constant_;
  for (const auto& t : terms_) {
    double w = t.frequency;
    double phi = t.phase;
    if (w < 0) {
      w = -w;
      phi = -phi;
    }
    if (w <= freq_eps) {
      c += t.amplitude * std::cos(phi);
      continue;
    }
    const Complex z = t.amplitude * std::exp(kImag * phi);
    auto it = std::find_if(phasors.begin(), phasors.end(), [&](const auto& p) {
      return std::abs(p.first - w) <= freq_eps;
    });
    if (it == phasors.end()) {
      phasors.push_back({w, z});
    } else {
      it->second += z;
    }
  }

  double max_amp = std::abs(c);
  for (const auto& [w, z] : phasors) max_amp = std::max(max_amp, std::abs(z));

  terms_.clear();
  constant_ = c;
  for (const auto& [w, z] : phasors) {
    const double a = std::abs(z);
    if (a <= kAmplitudeFloor * std::max(max_amp, 1.0)) continue;
    terms_.push_back({a, w, std::arg(z)});
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const TrigTerm& x, const TrigTerm& y) { return x.frequency < y.frequency; });
}

bool linearly_independent(const std::vector<TrigProfile>& profiles) {
  if (profiles.empty()) {
    throw std::invalid_argument("linearly_independent: empty profile list");
  }
  std::size_t total_terms = 0;
  double min_freq = 0.0;
  for (const auto& p : profiles) {
    total_terms += p.terms().size() + 1;
    for (const auto& t : p.terms()) {
      if (min_freq == 0.0 || t.frequency < min_freq) min_freq = t.frequency;
    }
  }
  const double window =
      min_freq > 0 ? 2.0 * std::numbers::pi / min_freq : 1.0;
  const int n_samples = std::max<int>(4 * static_cast<int>(total_terms), 16);

  Eigen::MatrixXd samples(n_samples, static_cast<int>(profiles.size()));
  for (int i = 0; i < n_samples; ++i) {
    const double t = (i + 0.5) * window / n_samples;
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      samples(i, static_cast<int>(j)) = profiles[j](t);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(samples);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return false;
  return sv(sv.size() - 1) > tolerances().profile_independence * sv(0);
}

// ---------------------------------------------------------------------------

std::vector<uint8_t> fibonacci_word(int n) {
  if (n < 1) throw std::invalid_argument("fibonacci_word: n >= 1 required");
  std::vector<uint8_t> prev = {0};       // F_1
  if (n == 1) return prev;
  std::vector<uint8_t> cur = {0, 1};     // F_2
  for (int k = 3; k <= n; ++k) {
    std::vector<uint8_t> next = cur;
    next.insert(next.end(), prev.begin(), prev.end());
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

PiecewiseProfile::PiecewiseProfile(double cell, std::vector<uint8_t> word,
                                   std::vector<double> values_per_symbol,
                                   bool periodic_word, double coarse_width,
                                   bool sqrt_of_average)
    : cell_(cell),
      word_(std::move(word)),
      values_(std::move(values_per_symbol)),
      periodic_(periodic_word),
      coarse_width_(coarse_width),
      sqrt_of_average_(sqrt_of_average) {
  if (cell_ <= 0) throw std::invalid_argument("PiecewiseProfile: cell length must be positive");
  if (word_.empty()) throw std::invalid_argument("PiecewiseProfile: empty word");
  if (coarse_width_ < 0) throw std::invalid_argument("PiecewiseProfile: negative coarse width");
  for (uint8_t s : word_) {
    if (s >= values_.size()) {
      throw std::invalid_argument("PiecewiseProfile: word symbol without a value");
    }
  }
  if (sqrt_of_average_) {
    for (double v : values_) {
      if (v < 0) throw std::invalid_argument("PiecewiseProfile: sqrt of negative value");
    }
  }
}

PiecewiseProfile PiecewiseProfile::from_word(double cell, std::vector<uint8_t> word,
                                             std::vector<double> values,
                                             double coarse_width) {
  return PiecewiseProfile(cell, std::move(word), std::move(values), true, coarse_width);
}

PiecewiseProfile PiecewiseProfile::fibonacci(double cell, std::vector<double> values,
                                             int truncation, double coarse_width) {
  return PiecewiseProfile(cell, fibonacci_word(truncation), std::move(values), false,
                          coarse_width);
}

double PiecewiseProfile::raw_value(double t) const {
  if (t < 0) throw std::invalid_argument("PiecewiseProfile: t >= 0 required");
  auto idx = static_cast<long long>(std::floor(t / cell_));
  if (periodic_) {
    idx %= static_cast<long long>(word_.size());
  } else if (idx >= static_cast<long long>(word_.size())) {
    throw std::invalid_argument("PiecewiseProfile: time beyond word horizon");
  }
  return values_[word_[static_cast<std::size_t>(idx)]];
}

double PiecewiseProfile::averaged_value(double t) const {
  if (coarse_width_ == 0.0) return raw_value(t);
  // (1/a) * integral_t^{t+a} raw, assembled from whole-cell overlaps.
  const double a = coarse_width_;
  double acc = 0.0;
  auto k0 = static_cast<long long>(std::floor(t / cell_));
  auto k1 = static_cast<long long>(std::floor((t + a) / cell_));
  for (auto k = k0; k <= k1; ++k) {
    const double lo = std::max(t, k * cell_);
    const double hi = std::min(t + a, (k + 1) * cell_);
    if (hi <= lo) continue;
    acc += raw_value((lo + hi) / 2) * (hi - lo);
  }
  return acc / a;
}

double PiecewiseProfile::operator()(double t) const {
  const double v = averaged_value(t);
  return sqrt_of_average_ ? std::sqrt(std::max(v, 0.0)) : v;
}

double PiecewiseProfile::max_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return sqrt_of_average_ ? std::sqrt(m) : m;
}

PiecewiseProfile PiecewiseProfile::sqrt_envelope() const {
  PiecewiseProfile out = *this;
  out.sqrt_of_average_ = true;
  for (double v : out.values_) {
    if (v < 0) throw std::invalid_argument("sqrt_envelope: negative symbol value");
  }
  return out;
}

std::vector<double> PiecewiseProfile::breakpoints(double t0, double t1) const {
  std::vector<double> pts;
  auto push_multiples = [&](double offset) {
    auto k = static_cast<long long>(std::ceil((t0 - offset) / cell_));
    for (; k * cell_ + offset < t1; ++k) {
      const double t = k * cell_ + offset;
      if (t > t0 && t < t1) pts.push_back(t);
    }
  };
  push_multiples(0.0);
  if (coarse_width_ > 0.0) push_multiples(-coarse_width_);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// ---------------------------------------------------------------------------

double Profile::operator()(double t) const {
  return std::visit([t](const auto& p) { return p(t); }, value_);
}

bool Profile::is_constant() const {
  if (is_trig()) return trig().is_constant();
  if (is_exp()) return exp_profile().rate == 0.0;
  return false;
}

bool Profile::quasiperiodic() const {
  if (is_exp()) return exp_profile().rate == 0.0;
  return true;
}

double Profile::longest_period() const {
  if (is_trig()) return trig().longest_period();
  if (is_piecewise()) {
    const auto& p = piecewise();
    return p.periodic_word() ? p.cell() * static_cast<double>(p.word_length()) : 0.0;
  }
  return 0.0;
}

std::vector<double> Profile::breakpoints(double t0, double t1) const {
  if (is_piecewise()) return piecewise().breakpoints(t0, t1);
  return {};
}

}  // namespace qsteady
