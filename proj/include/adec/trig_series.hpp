#pragma once

#include <cmath>
#include <vector>

namespace adec {

/// One component c*cos(f t) + s*sin(f t). The integer tag (p, q) records the
/// frequency as the combination p*w_plus + q*w_minus of the two normal modes,
/// so that products keep track of which sum/difference frequency a term is.
/// Terms whose frequency is not a mode combination keep the tag (0, 0) and are
/// told apart by frequency alone.
struct TrigTerm {
  int p = 0;
  int q = 0;
  double frequency = 0.0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Finite real trigonometric series in t. Products use the sum-to-product
/// identities and merge terms carrying the same (p, q) tag.
class TrigSeries {
 public:
  TrigSeries() = default;
  explicit TrigSeries(std::vector<TrigTerm> terms) : terms_(std::move(terms)) { canonicalize(); }

  static TrigSeries constant(double value) { return TrigSeries({TrigTerm{0, 0, 0.0, value, 0.0}}); }

  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }

  double operator()(double t) const noexcept {
    double sum = 0.0;
    for (const auto& term : terms_) {
      const double phase = term.frequency * t;
      sum += term.cos_coef * std::cos(phase) + term.sin_coef * std::sin(phase);
    }
    return sum;
  }

  TrigSeries derivative() const {
    std::vector<TrigTerm> out = terms_;
    for (auto& term : out) {
      const double c = term.cos_coef;
      term.cos_coef = term.sin_coef * term.frequency;
      term.sin_coef = -c * term.frequency;
    }
    return TrigSeries(std::move(out));
  }

  /// Coefficient pair for tag (p, q), also matching the mirrored tag (-p, -q)
  /// with the sine sign flipped. Returns zeros when absent.
  TrigTerm component(int p, int q) const noexcept {
    for (const auto& term : terms_) {
      if (term.p == p && term.q == q) return term;
      if (term.p == -p && term.q == -q) return TrigTerm{p, q, -term.frequency, term.cos_coef, -term.sin_coef};
    }
    return TrigTerm{p, q, 0.0, 0.0, 0.0};
  }

  TrigSeries& operator+=(const TrigSeries& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    canonicalize();
    return *this;
  }

  TrigSeries& operator*=(double factor) {
    for (auto& term : terms_) {
      term.cos_coef *= factor;
      term.sin_coef *= factor;
    }
    return *this;
  }

  friend TrigSeries operator+(TrigSeries lhs, const TrigSeries& rhs) { return lhs += rhs; }
  friend TrigSeries operator*(TrigSeries lhs, double factor) { return lhs *= factor; }
  friend TrigSeries operator*(double factor, TrigSeries rhs) { return rhs *= factor; }

  friend TrigSeries operator*(const TrigSeries& lhs, const TrigSeries& rhs) {
    std::vector<TrigTerm> out;
    out.reserve(2 * lhs.terms_.size() * rhs.terms_.size());
    for (const auto& a : lhs.terms_) {
      for (const auto& b : rhs.terms_) {
        const double c1 = a.cos_coef, s1 = a.sin_coef, c2 = b.cos_coef, s2 = b.sin_coef;
        out.push_back(TrigTerm{a.p + b.p, a.q + b.q, a.frequency + b.frequency,
                               0.5 * (c1 * c2 - s1 * s2), 0.5 * (s1 * c2 + c1 * s2)});
        out.push_back(TrigTerm{a.p - b.p, a.q - b.q, a.frequency - b.frequency,
                               0.5 * (c1 * c2 + s1 * s2), 0.5 * (s1 * c2 - c1 * s2)});
      }
    }
    return TrigSeries(std::move(out));
  }

 private:
  void canonicalize() {
    std::vector<TrigTerm> merged;
    merged.reserve(terms_.size());
    for (auto term : terms_) {
      const bool flip = term.frequency < 0.0 ||
                        (term.frequency == 0.0 && (term.p < 0 || (term.p == 0 && term.q < 0)));
      if (flip) {
        term.p = -term.p;
        term.q = -term.q;
        term.frequency = -term.frequency;
        term.sin_coef = -term.sin_coef;
      }
      if (term.frequency == 0.0) term.sin_coef = 0.0;
      bool found = false;
      for (auto& existing : merged) {
        if (existing.p == term.p && existing.q == term.q && existing.frequency == term.frequency) {
          existing.cos_coef += term.cos_coef;
          existing.sin_coef += term.sin_coef;
          found = true;
          break;
        }
      }
      if (!found) merged.push_back(term);
    }
    terms_ = std::move(merged);
  }

  std::vector<TrigTerm> terms_;
};

}  // namespace adec
