#pragma once

#include <string>
#include <utility>
#include <vector>

namespace invlab {

// Parametric front-like initial profiles w(X): a left plateau, a monotone
// cubic blend over [xi0 - 1, xi0], and the asymptotic tail formula on
// [xi0, +inf). Heavy kinds (light_heavy, algebraic, logarithmic) decay
// slower than every exponential.
class TailFamily {
 public:
  enum class Kind { compact, exponential, light_heavy, algebraic, logarithmic, constant };

  // w = plateau left of support_hi - 1, smooth drop to 0 at support_hi.
  static TailFamily compact(double support_hi, double plateau = 1.0);
  // tail formula exp(-lambda X)
  static TailFamily exponential(double lambda, double plateau = 1.0);
  // tail formula C exp(-b X^a), a in (0,1)
  static TailFamily light_heavy(double C, double b, double a, double plateau = 1.0);
  // tail formula C X^-a beyond X0 > 0
  static TailFamily algebraic(double C, double a, double X0 = 1.0, double plateau = 1.0);
  // tail formula C (ln X)^-a beyond X0 > 1
  static TailFamily logarithmic(double C, double a, double X0 = 2.0, double plateau = 1.0);
  static TailFamily constant(double level);

  Kind kind() const { return kind_; }
  double plateau() const { return plateau_; }
  double xi0() const { return xi0_; }
  double C() const { return C_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double lambda() const { return b_; }
  double support_hi() const { return xi0_; }

  bool heavy() const {
    return kind_ == Kind::light_heavy || kind_ == Kind::algebraic || kind_ == Kind::logarithmic;
  }
  bool invertible() const { return kind_ != Kind::compact && kind_ != Kind::constant; }

  double operator()(double X) const;

  // Asymptotic formula and its derivatives, valid for X >= xi0.
  double formula(double X) const;
  double formula_derivative(double X) const;
  double formula_second_derivative(double X) const;

  // Right inverse of the profile at a level in (0, plateau); monotone
  // families give x_min == x_max.
  std::pair<double, double> inverse(double level) const;

  std::string describe() const;

 private:
  TailFamily() = default;
  double blend(double X) const;

  Kind kind_ = Kind::constant;
  double plateau_ = 1.0;
  double C_ = 1.0;
  double a_ = 1.0;
  double b_ = 1.0;   // also lambda for exponential
  double X0_ = 0.0;  // family cutoff parameter
  double xi0_ = 0.0;
  double f_xi0_ = 1.0;   // formula value at xi0
  double d_xi0_ = 0.0;   // blend end-slope (monotonicity-clamped)
};

double eval_tail(const TailFamily& f, double X);
std::pair<double, double> tail_inverse(const TailFamily& f, double level);

// Flatness check w''(x) = o(w(x)): ratio w''/w on a doubling ladder.
struct ConditionQReport {
  bool passes = false;
  std::vector<double> x_ladder;
  std::vector<double> ratio;
  double limit_estimate = 0.0;
};

ConditionQReport check_condition_q(const TailFamily& f);

}  // namespace invlab
