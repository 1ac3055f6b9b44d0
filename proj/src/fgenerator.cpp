#include "sdpi/fgenerator.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "sdpi/conditions.hpp"
#include "sdpi/error.hpp"

namespace sdpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool close_to(double declared, double estimate, double tol) {
  return std::abs(declared - estimate) <= tol * std::max(1.0, std::abs(declared));
}

}  // namespace

double FGenerator::remainder_at(double u) const {
  if (remainder) return remainder(u);
  return eval(1.0 + u) - d1_at_one.value_or(0.0) * u;
}

std::optional<double> FGenerator::linear_upper_constant() const {
  if (!d1_at_one || !std::isfinite(f_at_zero)) return std::nullopt;
  return *d1_at_one + f_at_zero;
}

FGenerator make_kl() {
  FGenerator f;
  f.name = "kl";
  f.eval = [](double t) { return t > 0.0 ? t * std::log(t) : 0.0; };
  f.f_at_zero = 0.0;
  f.perspective_at_zero = kInf;
  f.d1_at_one = 1.0;
  f.d2_at_one = 1.0;
  f.d3_at_one = -1.0;
  f.second_derivative = [](double t) { return 1.0 / t; };
  f.remainder = [](double u) { return u == -1.0 ? 1.0 : (1.0 + u) * std::log1p(u) - u; };
  return f;
}

FGenerator make_chi2() {
  FGenerator f;
  f.name = "chi2";
  f.eval = [](double t) { return t * t - 1.0; };
  f.f_at_zero = -1.0;
  f.perspective_at_zero = kInf;
  f.d1_at_one = 2.0;
  f.d2_at_one = 2.0;
  f.d3_at_one = 0.0;
  f.second_derivative = [](double) { return 2.0; };
  f.remainder = [](double u) { return u * u; };
  return f;
}

FGenerator make_tv() {
  FGenerator f;
  f.name = "tv";
  f.eval = [](double t) { return 0.5 * std::abs(t - 1.0); };
  f.f_at_zero = 0.5;
  f.perspective_at_zero = 0.5;
  f.remainder = [](double u) { return 0.5 * std::abs(u); };
  return f;
}

FGenerator make_tsallis(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0) {
    std::ostringstream os;
    os << "tsallis: alpha = " << alpha << " must lie in (0, 2] and differ from 1";
    throw InputError(os.str());
  }
  FGenerator f;
  f.name = "tsallis:" + shortest(alpha);
  const double am1 = alpha - 1.0;
  // expm1 keeps full accuracy when alpha is close to 1
  f.eval = [alpha, am1](double t) {
    if (t == 0.0) return -1.0 / am1;
    return std::expm1(alpha * std::log(t)) / am1;
  };
  f.f_at_zero = 1.0 / (1.0 - alpha);
  f.perspective_at_zero = alpha < 1.0 ? 0.0 : kInf;
  f.d1_at_one = alpha / am1;
  f.d2_at_one = alpha;
  f.d3_at_one = alpha * (alpha - 2.0);
  f.second_derivative = [alpha](double t) { return alpha * std::pow(t, alpha - 2.0); };
  f.remainder = [alpha, am1](double u) {
    if (u == -1.0) return 1.0;  // f(0) + f'(1) = 1
    return (std::expm1(alpha * std::log1p(u)) - alpha * u) / am1;
  };
  return f;
}

FGenerator make_builtin_f(BuiltinKind kind, double alpha) {
  switch (kind) {
    case BuiltinKind::kl:
      return make_kl();
    case BuiltinKind::chi2:
      return make_chi2();
    case BuiltinKind::tv:
      return make_tv();
    case BuiltinKind::tsallis:
      return make_tsallis(alpha);
  }
  throw InputError("unknown generator kind");
}

FGenerator parse_f(std::string_view name) {
  if (name == "kl") return make_kl();
  if (name == "chi2") return make_chi2();
  if (name == "tv") return make_tv();
  constexpr std::string_view prefix = "tsallis:";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string arg(name.substr(prefix.size()));
    char* end = nullptr;
    const double alpha = std::strtod(arg.c_str(), &end);
    if (arg.empty() || end != arg.c_str() + arg.size()) {
      throw InputError("tsallis: cannot parse alpha from '" + arg + "'");
    }
    return make_tsallis(alpha);
  }
  throw InputError("unknown generator '" + std::string(name) +
                   "' (expected kl, chi2, tv or tsallis:<alpha>)");
}

FValidation validate(const FGenerator& f) {
  FValidation v;
  auto fail = [&v](std::string msg) {
    if (v.ok) v.message = std::move(msg);
    v.ok = false;
  };
  if (!f.eval) {
    fail("generator has no evaluation function");
    return v;
  }
  v.f_at_one = f(1.0);
  if (!(std::abs(v.f_at_one) <= 1e-12)) fail("f(1) = " + shortest(v.f_at_one) + ", expected 0");
  if (f.d2_at_one && !(*f.d2_at_one > 0.0)) fail("declared f''(1) must be positive");

  const double h1 = 1e-5;
  v.fd_d1 = (f(1.0 + h1) - f(1.0 - h1)) / (2.0 * h1);
  const double h2 = 1e-4;
  v.fd_d2 = (f(1.0 + h2) - 2.0 * f(1.0) + f(1.0 - h2)) / (h2 * h2);
  const double h3 = 1e-3;
  v.fd_d3 = (f(1.0 + 2 * h3) - 2.0 * f(1.0 + h3) + 2.0 * f(1.0 - h3) - f(1.0 - 2 * h3)) /
            (2.0 * h3 * h3 * h3);
  constexpr double tol = 1e-5;
  if (f.d1_at_one && !close_to(*f.d1_at_one, *v.fd_d1, tol)) {
    fail("declared f'(1) = " + shortest(*f.d1_at_one) + " disagrees with finite difference " +
         shortest(*v.fd_d1));
  }
  if (f.d2_at_one && !close_to(*f.d2_at_one, *v.fd_d2, tol)) {
    fail("declared f''(1) = " + shortest(*f.d2_at_one) + " disagrees with finite difference " +
         shortest(*v.fd_d2));
  }
  if (f.d3_at_one && !close_to(*f.d3_at_one, *v.fd_d3, tol)) {
    fail("declared f'''(1) = " + shortest(*f.d3_at_one) + " disagrees with finite difference " +
         shortest(*v.fd_d3));
  }

  const std::vector<double> t = GridSpec{}.values();
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double a = t[i - 1], b = t[i], c = t[i + 1];
    const double fa = f(a), fb = f(b), fc = f(c);
    const double chord = ((c - b) * fa + (b - a) * fc) / (c - a);
    const double scale = std::max({1.0, std::abs(fa), std::abs(fb), std::abs(fc)});
    if (!(fb <= chord + 1e-10 * scale)) {
      fail("f is not convex near t = " + shortest(b));
      break;
    }
  }
  return v;
}

FGenerator make_user_f(UserFDeclaration decl) {
  if (decl.name.empty()) throw InputError("user generator needs a name");
  FGenerator f;
  f.name = std::move(decl.name);
  f.eval = std::move(decl.eval);
  f.f_at_zero = decl.f_at_zero;
  f.perspective_at_zero = decl.perspective_at_zero;
  f.d1_at_one = decl.d1_at_one;
  f.d2_at_one = decl.d2_at_one;
  f.d3_at_one = decl.d3_at_one;
  f.second_derivative = std::move(decl.second_derivative);
  f.remainder = std::move(decl.remainder);
  const FValidation v = validate(f);
  if (!v.ok) throw InputError("generator '" + f.name + "': " + v.message);
  return f;
}

}  // namespace sdpi
