#ifndef VORTEXLAB_COMMON_HPP
#define VORTEXLAB_COMMON_HPP

#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vortexlab {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Error taxonomy. `validation` errors are rejected inputs (bad parameters,
// violated preconditions); `numerical` errors are legitimate runs that end in
// a reported failure state (non-convergence, obstruction, degeneracy).
enum class ErrorClass { validation, numerical };

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what, ErrorClass cls)
        : std::runtime_error(what), code_(std::move(code)), cls_(cls) {}
    const std::string& code() const { return code_; }
    ErrorClass error_class() const { return cls_; }

private:
    std::string code_;
    ErrorClass cls_;
};

#define VORTEXLAB_DEFINE_ERROR(Name, Cls)                                    \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what)                               \
            : Error(#Name, what, ErrorClass::Cls) {}                         \
    }

VORTEXLAB_DEFINE_ERROR(InvalidGeometry, validation);
VORTEXLAB_DEFINE_ERROR(InvalidOmega, validation);
VORTEXLAB_DEFINE_ERROR(DomainTooSmall, validation);
VORTEXLAB_DEFINE_ERROR(OutOfDomain, validation);
VORTEXLAB_DEFINE_ERROR(InvalidTestField, validation);
VORTEXLAB_DEFINE_ERROR(InvalidConstraints, validation);
VORTEXLAB_DEFINE_ERROR(InvalidFold, validation);
VORTEXLAB_DEFINE_ERROR(UnknownExpression, validation);
VORTEXLAB_DEFINE_ERROR(DegenerateNormalization, numerical);
VORTEXLAB_DEFINE_ERROR(MaxIterExceeded, numerical);
VORTEXLAB_DEFINE_ERROR(JacobianSingular, numerical);
VORTEXLAB_DEFINE_ERROR(SelfIntersection, numerical);
VORTEXLAB_DEFINE_ERROR(NoRoot, numerical);

#undef VORTEXLAB_DEFINE_ERROR

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point operator*(double s, Point p) { return {s * p.x1, s * p.x2}; }
inline double dot(Point a, Point b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Point p) { return std::hypot(p.x1, p.x2); }

struct Box {
    double x_min, x_max, y_min, y_max;
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

// Worker cap for the parallel helpers; 0 means hardware concurrency.
inline unsigned& max_threads() {
    static unsigned cap = 0;
    return cap;
}

inline unsigned effective_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned cap = max_threads();
    return cap == 0 ? hw : std::min(cap, hw);
}

// Runs fn(begin, end) over a partition of [0, n). Chunks are fixed by n and
// the worker count, never by timing, so any per-chunk results can be reduced
// in index order deterministically.
template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
    unsigned workers = effective_threads();
    if (n == 0) return;
    if (workers <= 1 || n < 2 * workers) {
        fn(std::size_t{0}, n);
        return;
    }
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    for (std::size_t lo = 0; lo < n; lo += chunk) {
        std::size_t hi = std::min(n, lo + chunk);
        futs.push_back(std::async(std::launch::async, [&fn, lo, hi] { fn(lo, hi); }));
    }
    for (auto& f : futs) f.get();
}

// Composite Simpson on [a, b] with n subintervals (n rounded up to even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Bisection for a sign change of f on [a, b]; throws NoRoot without one.
template <typename F>
double bisect(F&& f, double a, double b, double tol, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        throw NoRoot("no sign change on the bracketing interval");
    for (int i = 0; i < max_iter; ++i) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (std::abs(fm) <= tol || 0.5 * (b - a) < 1e-16) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace vortexlab

#endif
