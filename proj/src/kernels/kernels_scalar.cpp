#include "polcav/kernels/kernels.hpp"

namespace polcav::kernels {

namespace {

void spmv_scalar(const CsrMatrix& a, const cplx* x, cplx* y) {
    for (int r = 0; r < a.rows; ++r) {
        cplx acc(0.0, 0.0);
        const int end = a.row_ptr[r + 1];
        for (int k = a.row_ptr[r]; k < end; ++k) {
            acc += a.vals[k] * x[a.col_idx[k]];
        }
        y[r] = acc;
    }
}

void axpy_scalar(int n, cplx alpha, const cplx* x, cplx* y) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void wxpay_scalar(int n, const cplx* x, cplx alpha, const cplx* y, cplx* w) {
    for (int i = 0; i < n; ++i) w[i] = x[i] + alpha * y[i];
}

double nrm2sq_scalar(int n, const cplx* x) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

cplx dotc_scalar(int n, const cplx* x, const cplx* y) {
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

} // namespace

const Dispatch& scalar_kernels() {
    static const Dispatch table{Isa::Scalar, &spmv_scalar, &axpy_scalar,
                                &wxpay_scalar, &nrm2sq_scalar, &dotc_scalar};
    return table;
}

} // namespace polcav::kernels
