#pragma once

#include <complex>
#include <string>

#include "polcav/kernels/csr.hpp"

// Scalar reference kernels plus SIMD variants for the inner loops of the
// superoperator algebra: complex axpy/dot/norm and CSR SpMV. The variant is
// picked once at startup from CPU capabilities; POLCAV_KERNELS=scalar|avx2
// overrides the choice. All variants are interchangeable and equivalence-
// tested against the scalar reference.
namespace polcav::kernels {

enum class Isa { Scalar, Avx2 };

struct Dispatch {
    Isa isa = Isa::Scalar;
    // y = A x
    void (*spmv)(const CsrMatrix& a, const cplx* x, cplx* y) = nullptr;
    // y += alpha x
    void (*axpy)(int n, cplx alpha, const cplx* x, cplx* y) = nullptr;
    // w = x + alpha y
    void (*wxpay)(int n, const cplx* x, cplx alpha, const cplx* y, cplx* w) = nullptr;
    // sum |x_i|^2
    double (*nrm2sq)(int n, const cplx* x) = nullptr;
    // sum conj(x_i) y_i
    cplx (*dotc)(int n, const cplx* x, const cplx* y) = nullptr;
};

const Dispatch& scalar_kernels();

// Null when the binary was built without AVX2 support.
const Dispatch* avx2_kernels();

bool cpu_has_avx2();

// Runtime-selected table (env override applied on first call).
const Dispatch& active();

std::string isa_name(Isa isa);

} // namespace polcav::kernels
