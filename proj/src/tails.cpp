#include "invlab/tails.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "invlab/errors.hpp"

namespace invlab {

namespace {

// Hermite basis on [0,1] with left slope 0.
double hermite(double p, double f1, double d1, double u) {
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return p * h00 + f1 * h01 + d1 * h11;
}

}  // namespace

TailFamily TailFamily::compact(double support_hi, double plateau) {
  if (!(plateau > 0)) throw std::invalid_argument("TailFamily: plateau must be > 0");
  TailFamily f;
  f.kind_ = Kind::compact;
  f.plateau_ = plateau;
  f.xi0_ = support_hi;
  f.f_xi0_ = 0.0;
  f.d_xi0_ = 0.0;
  return f;
}

TailFamily TailFamily::exponential(double lambda, double plateau) {
  if (!(lambda > 0)) throw std::invalid_argument("TailFamily: lambda must be > 0");
  if (!(plateau > 0)) throw std::invalid_argument("TailFamily: plateau must be > 0");
  TailFamily f;
  f.kind_ = Kind::exponential;
  f.plateau_ = plateau;
  f.C_ = 1.0;
  f.b_ = lambda;
  f.xi0_ = -std::log(plateau) / lambda;
  f.f_xi0_ = f.formula(f.xi0_);
  f.d_xi0_ = std::clamp(f.formula_derivative(f.xi0_), 3 * (f.f_xi0_ - plateau), 0.0);
  return f;
}

TailFamily TailFamily::light_heavy(double C, double b, double a, double plateau) {
  if (!(C > 0 && b > 0)) throw std::invalid_argument("TailFamily: C, b must be > 0");
  if (!(a > 0 && a < 1)) throw std::invalid_argument("TailFamily: need a in (0,1)");
  if (!(plateau > 0)) throw std::invalid_argument("TailFamily: plateau must be > 0");
  TailFamily f;
  f.kind_ = Kind::light_heavy;
  f.plateau_ = plateau;
  f.C_ = C;
  f.b_ = b;
  f.a_ = a;
  f.xi0_ = C > plateau ? std::pow(std::log(C / plateau) / b, 1.0 / a) : 0.0;
  f.f_xi0_ = f.formula(f.xi0_);
  f.d_xi0_ = std::clamp(f.formula_derivative(f.xi0_), 3 * (f.f_xi0_ - plateau), 0.0);
  return f;
}

TailFamily TailFamily::algebraic(double C, double a, double X0, double plateau) {
  if (!(C > 0 && a > 0)) throw std::invalid_argument("TailFamily: C, a must be > 0");
  if (!(X0 > 0)) throw std::invalid_argument("TailFamily: X0 must be > 0");
  if (!(plateau > 0)) throw std::invalid_argument("TailFamily: plateau must be > 0");
  TailFamily f;
  f.kind_ = Kind::algebraic;
  f.plateau_ = plateau;
  f.C_ = C;
  f.a_ = a;
  f.X0_ = X0;
  f.xi0_ = std::max(X0, std::pow(C / plateau, 1.0 / a));
  f.f_xi0_ = f.formula(f.xi0_);
  f.d_xi0_ = std::clamp(f.formula_derivative(f.xi0_), 3 * (f.f_xi0_ - plateau), 0.0);
  return f;
}

TailFamily TailFamily::logarithmic(double C, double a, double X0, double plateau) {
  if (!(C > 0 && a > 0)) throw std::invalid_argument("TailFamily: C, a must be > 0");
  if (!(X0 > 1)) throw std::invalid_argument("TailFamily: X0 must be > 1");
  if (!(plateau > 0)) throw std::invalid_argument("TailFamily: plateau must be > 0");
  TailFamily f;
  f.kind_ = Kind::logarithmic;
  f.plateau_ = plateau;
  f.C_ = C;
  f.a_ = a;
  f.X0_ = X0;
  f.xi0_ = std::max(X0, std::exp(std::pow(C / plateau, 1.0 / a)));
  f.f_xi0_ = f.formula(f.xi0_);
  f.d_xi0_ = std::clamp(f.formula_derivative(f.xi0_), 3 * (f.f_xi0_ - plateau), 0.0);
  return f;
}

TailFamily TailFamily::constant(double level) {
  if (!(level > 0)) throw std::invalid_argument("TailFamily: level must be > 0");
  TailFamily f;
  f.kind_ = Kind::constant;
  f.plateau_ = level;
  return f;
}

double TailFamily::formula(double X) const {
  switch (kind_) {
    case Kind::exponential:
      return std::exp(-b_ * X);
    case Kind::light_heavy:
      return C_ * std::exp(-b_ * std::pow(std::max(X, 0.0), a_));
    case Kind::algebraic:
      return C_ * std::pow(X, -a_);
    case Kind::logarithmic:
      return C_ * std::pow(std::log(X), -a_);
    case Kind::constant:
      return plateau_;
    case Kind::compact:
      return 0.0;
  }
  return 0.0;
}

double TailFamily::formula_derivative(double X) const {
  switch (kind_) {
    case Kind::exponential:
      return -b_ * std::exp(-b_ * X);
    case Kind::light_heavy: {
      const double xp = std::max(X, 1e-300);
      return -a_ * b_ * std::pow(xp, a_ - 1) * formula(X);
    }
    case Kind::algebraic:
      return -a_ * C_ * std::pow(X, -a_ - 1);
    case Kind::logarithmic:
      return -a_ * C_ * std::pow(std::log(X), -a_ - 1) / X;
    default:
      return 0.0;
  }
}

double TailFamily::formula_second_derivative(double X) const {
  switch (kind_) {
    case Kind::exponential:
      return b_ * b_ * std::exp(-b_ * X);
    case Kind::light_heavy: {
      const double xp = std::max(X, 1e-300);
      const double q = a_ * a_ * b_ * b_ * std::pow(xp, 2 * a_ - 2) -
                       a_ * b_ * (a_ - 1) * std::pow(xp, a_ - 2);
      return q * formula(X);
    }
    case Kind::algebraic:
      return a_ * (a_ + 1) * C_ * std::pow(X, -a_ - 2);
    case Kind::logarithmic: {
      const double u = std::log(X);
      return a_ * C_ / (X * X) *
             ((a_ + 1) * std::pow(u, -a_ - 2) + std::pow(u, -a_ - 1));
    }
    default:
      return 0.0;
  }
}

double TailFamily::blend(double X) const {
  const double u = X - (xi0_ - 1.0);
  return hermite(plateau_, f_xi0_, d_xi0_, std::clamp(u, 0.0, 1.0));
}

double TailFamily::operator()(double X) const {
  switch (kind_) {
    case Kind::constant:
      return plateau_;
    case Kind::compact:
      if (X >= xi0_) return 0.0;
      if (X <= xi0_ - 1.0) return plateau_;
      return blend(X);
    default:
      if (X >= xi0_) return formula(X);
      if (X <= xi0_ - 1.0) return plateau_;
      return blend(X);
  }
}

std::pair<double, double> TailFamily::inverse(double level) const {
  if (!invertible())
    throw Unsupported("tail_inverse: " + describe() + " has no closed-form inverse");
  if (!(level > 0) || !(level < plateau_))
    throw LevelOutOfRange("tail_inverse: level must lie in (0, plateau)");

  if (level >= f_xi0_) {
    // Level sits in the blend zone; invert the monotone cubic by bisection.
    double lo = xi0_ - 1.0, hi = xi0_;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((*this)(mid) > level ? lo : hi) = mid;
      if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
    }
    const double x = 0.5 * (lo + hi);
    return {x, x};
  }

  double x = 0;
  switch (kind_) {
    case Kind::exponential:
      x = -std::log(level) / b_;
      break;
    case Kind::light_heavy:
      x = std::pow(std::log(C_ / level) / b_, 1.0 / a_);
      break;
    case Kind::algebraic:
      x = std::pow(C_ / level, 1.0 / a_);
      break;
    case Kind::logarithmic:
      x = std::exp(std::pow(C_ / level, 1.0 / a_));
      break;
    default:
      break;
  }
  return {x, x};
}

std::string TailFamily::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::compact:
      out << "compact(support_hi=" << xi0_ << ")";
      break;
    case Kind::exponential:
      out << "exponential(lambda=" << b_ << ")";
      break;
    case Kind::light_heavy:
      out << "light_heavy(C=" << C_ << ", b=" << b_ << ", a=" << a_ << ")";
      break;
    case Kind::algebraic:
      out << "algebraic(C=" << C_ << ", a=" << a_ << ", X0=" << X0_ << ")";
      break;
    case Kind::logarithmic:
      out << "logarithmic(C=" << C_ << ", a=" << a_ << ", X0=" << X0_ << ")";
      break;
    case Kind::constant:
      out << "constant(level=" << plateau_ << ")";
      break;
  }
  return out.str();
}

double eval_tail(const TailFamily& f, double X) { return f(X); }

std::pair<double, double> tail_inverse(const TailFamily& f, double level) {
  return f.inverse(level);
}

ConditionQReport check_condition_q(const TailFamily& f) {
  if (!f.heavy() && f.kind() != TailFamily::Kind::exponential)
    throw Unsupported("check_condition_q: needs a heavy or exponential family");

  // Closed-form w''/w of the tail formula; avoids underflow of w itself.
  const auto ratio_at = [&](double x) -> double {
    const double a = f.a(), b = f.b(), C = f.C();
    switch (f.kind()) {
      case TailFamily::Kind::exponential:
        return b * b;
      case TailFamily::Kind::light_heavy:
        return a * a * b * b * std::pow(x, 2 * a - 2) -
               a * b * (a - 1) * std::pow(x, a - 2);
      case TailFamily::Kind::algebraic:
        return a * (a + 1) / (x * x);
      case TailFamily::Kind::logarithmic: {
        const double u = std::log(x);
        (void)C;
        return a / (x * x) * ((a + 1) / (u * u) + 1.0 / u);
      }
      default:
        return 0.0;
    }
  };

  ConditionQReport report;
  double x = std::max(f.xi0() + 1.0, 2.0);
  for (int k = 0; k < 24; ++k, x *= 2) {
    report.x_ladder.push_back(x);
    report.ratio.push_back(ratio_at(x));
  }
  report.limit_estimate = report.ratio.back();

  bool nonincreasing = true;
  for (std::size_t i = 1; i < report.ratio.size(); ++i)
    if (report.ratio[i] > report.ratio[i - 1] * (1 + 1e-12)) nonincreasing = false;
  const double first = report.ratio.front(), last = report.ratio.back();
  report.passes = nonincreasing && std::isfinite(last) && last <= 0.25 * first;
  return report;
}

}  // namespace invlab
