#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "vpuq/grid.hpp"

namespace vpuq {

/* Thin RAII wrapper over FFTW's real 1D transforms, with a per-size plan
 * cache. Plans are created with FFTW_ESTIMATE so that repeated runs pick the
 * same algorithm (bit-identical outputs).
 *
 * Not thread-safe: solvers and studies run their transforms on one thread.
 */
class Rfft {
  public:
    explicit Rfft(int n) : n_(n), real_(n), spec_(n / 2 + 1) {
        fwd_ = fftw_plan_dft_r2c_1d(n, real_.data(), reinterpret_cast<fftw_complex*>(spec_.data()),
                                    FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spec_.data()), real_.data(),
                                    FFTW_ESTIMATE);
    }
    ~Rfft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Rfft(const Rfft&) = delete;
    Rfft& operator=(const Rfft&) = delete;

    int n() const { return n_; }
    int n_modes() const { return n_ / 2 + 1; }

    /// Unnormalized forward transform.
    std::vector<std::complex<double>> forward(const std::vector<double>& in) {
        std::copy(in.begin(), in.end(), real_.begin());
        fftw_execute(fwd_);
        return spec_;
    }

    /// Inverse transform including the 1/n normalization.
    std::vector<double> backward(const std::vector<std::complex<double>>& spec) {
        std::copy(spec.begin(), spec.end(), spec_.begin());
        fftw_execute(bwd_);
        std::vector<double> out(real_);
        const double scale = 1.0 / n_;
        for (double& v : out) v *= scale;
        return out;
    }

    static Rfft& cached(int n) {
        static std::map<int, std::unique_ptr<Rfft>> cache;
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, std::make_unique<Rfft>(n)).first;
        return *it->second;
    }

  private:
    int n_;
    std::vector<double> real_;
    std::vector<std::complex<double>> spec_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

/// l-th spectral derivative of a periodic sample on n nodes over period L.
/// The Nyquist mode is zeroed for l >= 1 (its odd derivative is not
/// representable in the real transform convention).
inline std::vector<double> spectral_derivative(const std::vector<double>& values, int l, double L) {
    if (l == 0) return values;
    const int n = static_cast<int>(values.size());
    Rfft& fft = Rfft::cached(n);
    auto spec = fft.forward(values);
    const double k0 = 2.0 * M_PI / L;
    for (int k = 0; k < fft.n_modes(); ++k) {
        if (k == 0 || 2 * k == n) {
            spec[k] = 0.0;
            continue;
        }
        const std::complex<double> ik(0.0, k0 * k);
        std::complex<double> mult = 1.0;
        for (int p = 0; p < l; ++p) mult *= ik;
        spec[k] *= mult;
    }
    return fft.backward(spec);
}

/// Evaluate the trigonometric interpolant of `values` (period L) at arbitrary
/// points. Direct mode summation; used for off-grid resampling.
inline std::vector<double> trig_resample(const std::vector<double>& values, double L,
                                         const std::vector<double>& points) {
    const int n = static_cast<int>(values.size());
    Rfft& fft = Rfft::cached(n);
    auto spec = fft.forward(values);
    const double k0 = 2.0 * M_PI / L;
    std::vector<double> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double x = points[p];
        double s = spec[0].real() / n;
        for (int k = 1; k < fft.n_modes(); ++k) {
            const double w = (2 * k == n) ? 0.5 : 1.0;  // Nyquist counted once
            const std::complex<double> phase(std::cos(k0 * k * x), std::sin(k0 * k * x));
            s += 2.0 * w * (spec[k] * phase).real() / n;
        }
        out[p] = s;
    }
    return out;
}

}  // namespace vpuq
