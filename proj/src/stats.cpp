#include "rankfuse/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "rankfuse/types.hpp"

namespace rankfuse::eval {

namespace {

// Continued fraction for the incomplete beta function, modified Lentz method.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    return h;  // converged to working precision for all df/x seen in practice
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ibeta requires a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("ibeta requires x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ValidationError("paired t-test inputs differ in length");
    const std::size_t n = a.size();
    if (n < 2) throw ValidationError("paired t-test needs n >= 2");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    const double variance = ss / static_cast<double>(n - 1);

    TTestResult result;
    result.n = n;
    if (variance == 0.0) {
        result.degenerate = true;
        result.t = 0.0;
        result.p = (mean == 0.0) ? 1.0 : 0.0;
        return result;
    }
    const double se = std::sqrt(variance / static_cast<double>(n));
    result.t = mean / se;
    result.p = student_t_two_sided_p(result.t, static_cast<double>(n - 1));
    return result;
}

TTestResult paired_t_test(const std::map<std::string, double>& per_query_a,
                          const std::map<std::string, double>& per_query_b) {
    if (per_query_a.size() != per_query_b.size()) {
        throw ValidationError("paired t-test: qid sets differ in size");
    }
    std::vector<double> a, b;
    a.reserve(per_query_a.size());
    b.reserve(per_query_b.size());
    auto ib = per_query_b.begin();
    for (auto ia = per_query_a.begin(); ia != per_query_a.end(); ++ia, ++ib) {
        if (ia->first != ib->first) {
            throw ValidationError("paired t-test: qid sets differ ('" + ia->first + "' vs '" +
                                  ib->first + "')");
        }
        a.push_back(ia->second);
        b.push_back(ib->second);
    }
    return paired_t_test(a, b);
}

double bonferroni_adjust(double p, std::size_t m) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p-value outside [0,1]");
    if (m < 1) throw std::invalid_argument("test count m must be >= 1");
    return std::min(1.0, static_cast<double>(m) * p);
}

}  // namespace rankfuse::eval
