#include "eqnet/channel_estimate.hpp"

#include <cmath>
#include <vector>

#include "eqnet/errors.hpp"

namespace eqnet {

std::vector<double> ls_channel_estimate(const PilotRecord& pilot, int num_taps) {
    std::size_t n = pilot.symbols.size();
    if (pilot.observed.size() != n) throw ShapeError("pilot symbol/observation length mismatch");
    if (num_taps < 1 || n < static_cast<std::size_t>(num_taps))
        throw ShapeError("pilot must be at least as long as the tap count");

    int L = num_taps;
    // Normal equations A h = b with A = S^T S, b = S^T r, S the causal
    // convolution matrix (zero initial state).
    std::vector<double> A(static_cast<std::size_t>(L) * L, 0.0);
    std::vector<double> b(L, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < L; ++k) {
            if (i < static_cast<std::size_t>(k)) continue;
            double sk = pilot.symbols[i - k];
            b[k] += sk * pilot.observed[i];
            for (int l = 0; l <= k; ++l)
                A[static_cast<std::size_t>(k) * L + l] += sk * pilot.symbols[i - l];
        }
    }
    for (int k = 0; k < L; ++k)
        for (int l = k + 1; l < L; ++l)
            A[static_cast<std::size_t>(k) * L + l] = A[static_cast<std::size_t>(l) * L + k];

    // Gaussian elimination with partial pivoting.
    double scale = 0.0;
    for (double v : A) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) throw SingularSystemError("pilot matrix is zero");

    std::vector<double> h(L, 0.0);
    for (int col = 0; col < L; ++col) {
        int piv = col;
        for (int row = col + 1; row < L; ++row)
            if (std::fabs(A[static_cast<std::size_t>(row) * L + col]) >
                std::fabs(A[static_cast<std::size_t>(piv) * L + col]))
                piv = row;
        double pval = A[static_cast<std::size_t>(piv) * L + col];
        if (std::fabs(pval) < 1e-12 * scale)
            throw SingularSystemError("pilot matrix is rank deficient");
        if (piv != col) {
            for (int c = 0; c < L; ++c)
                std::swap(A[static_cast<std::size_t>(piv) * L + c],
                          A[static_cast<std::size_t>(col) * L + c]);
            std::swap(b[piv], b[col]);
        }
        for (int row = col + 1; row < L; ++row) {
            double f = A[static_cast<std::size_t>(row) * L + col] /
                       A[static_cast<std::size_t>(col) * L + col];
            if (f == 0.0) continue;
            for (int c = col; c < L; ++c)
                A[static_cast<std::size_t>(row) * L + c] -=
                    f * A[static_cast<std::size_t>(col) * L + c];
            b[row] -= f * b[col];
        }
    }
    for (int row = L - 1; row >= 0; --row) {
        double acc = b[row];
        for (int c = row + 1; c < L; ++c)
            acc -= A[static_cast<std::size_t>(row) * L + c] * h[c];
        h[row] = acc / A[static_cast<std::size_t>(row) * L + row];
    }
    return h;
}

}  // namespace eqnet
