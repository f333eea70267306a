#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sumspace/kernels.hpp"

namespace sumspace::kernels {

namespace avx2 {

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_min_sd(lo, sh));
}

// |d|^p for d >= 0. Integer and half-integer exponents stay in registers.
struct PowPlan {
    int whole = 0;
    bool half = false;
    bool general = true;
    double p = 1.0;

    explicit PowPlan(double pp) : p(pp) {
        double twice = 2.0 * pp;
        if (twice == std::floor(twice) && pp >= 0.0 && pp <= 16.0) {
            whole = static_cast<int>(std::floor(pp));
            half = (twice - 2.0 * whole) != 0.0;
            general = false;
        }
    }

    __m256d apply(__m256d d) const {
        if (general) {
            alignas(32) double tmp[4];
            _mm256_store_pd(tmp, d);
            for (double& t : tmp) t = std::pow(t, p);
            return _mm256_load_pd(tmp);
        }
        __m256d acc = _mm256_set1_pd(1.0);
        __m256d base = d;
        for (int e = whole; e > 0; e >>= 1) {
            if (e & 1) acc = _mm256_mul_pd(acc, base);
            base = _mm256_mul_pd(base, base);
        }
        if (half) acc = _mm256_mul_pd(acc, _mm256_sqrt_pd(d));
        return acc;
    }

    double apply(double d) const {
        if (general) return std::pow(d, p);
        double acc = 1.0, base = d;
        for (int e = whole; e > 0; e >>= 1) {
            if (e & 1) acc *= base;
            base *= base;
        }
        if (half) acc *= std::sqrt(d);
        return acc;
    }
};

double cube_mass(const double* xs, const double* ys, const double* w, std::size_t n, double cx,
                 double cy, double r) {
    const __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy), vr = _mm256_set1_pd(r);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d m = _mm256_cmp_pd(vabs(_mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx)), vr, _CMP_LE_OQ);
        if (ys)
            m = _mm256_and_pd(
                m, _mm256_cmp_pd(vabs(_mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy)), vr, _CMP_LE_OQ));
        acc = _mm256_add_pd(acc, _mm256_and_pd(m, _mm256_loadu_pd(w + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        bool in = std::abs(xs[i] - cx) <= r;
        if (ys) in = in && std::abs(ys[i] - cy) <= r;
        if (in) s += w[i];
    }
    return s;
}

double min_dist_to_cube(const double* xs, const double* ys, std::size_t n, double cx, double cy,
                        double r) {
    const __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy), vr = _mm256_set1_pd(r);
    const __m256d zero = _mm256_setzero_pd();
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(vabs(_mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx)), vr);
        if (ys)
            d = _mm256_max_pd(d, _mm256_sub_pd(vabs(_mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy)), vr));
        best = _mm256_min_pd(best, _mm256_max_pd(d, zero));
    }
    double b = hmin(best);
    for (; i < n; ++i) {
        double d = std::abs(xs[i] - cx) - r;
        if (ys) d = std::max(d, std::abs(ys[i] - cy) - r);
        b = std::min(b, std::max(d, 0.0));
    }
    return b;
}

void linf_distances(const double* xs, const double* ys, std::size_t n, double px, double py,
                    double* out) {
    const __m256d vpx = _mm256_set1_pd(px), vpy = _mm256_set1_pd(py);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(xs + i), vpx));
        if (ys) d = _mm256_max_pd(d, vabs(_mm256_sub_pd(_mm256_loadu_pd(ys + i), vpy)));
        _mm256_storeu_pd(out + i, d);
    }
    for (; i < n; ++i) {
        double d = std::abs(xs[i] - px);
        if (ys) d = std::max(d, std::abs(ys[i] - py));
        out[i] = d;
    }
}

double weighted_power_sum(const double* v, const double* w, std::size_t n, double p) {
    const PowPlan plan(p);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i),
                                               plan.apply(vabs(_mm256_loadu_pd(v + i)))));
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * plan.apply(std::abs(v[i]));
    return s;
}

double pair_power_sum(const double* fa, const double* wa, std::size_t na, const double* fb,
                      const double* wb, std::size_t nb, double p) {
    const PowPlan plan(p);
    double s = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        const __m256d va = _mm256_set1_pd(fa[i]);
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= nb; j += 4) {
            __m256d d = vabs(_mm256_sub_pd(va, _mm256_loadu_pd(fb + j)));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(wb + j), plan.apply(d)));
        }
        double row = hsum(acc);
        for (; j < nb; ++j) row += wb[j] * plan.apply(std::abs(fa[i] - fb[j]));
        s += wa[i] * row;
    }
    return s;
}

}  // namespace avx2

const Table& avx2_table() {
    static const Table t{avx2::cube_mass, avx2::min_dist_to_cube, avx2::linf_distances,
                         avx2::weighted_power_sum, avx2::pair_power_sum};
    return t;
}

}  // namespace sumspace::kernels
