#pragma once

#include <complex>
#include <vector>

#include <Eigen/SparseCore>

#include "polcav/errors.hpp"

namespace polcav::kernels {

using cplx = std::complex<double>;

// Compressed-sparse-row storage used by the hot loops (SpMV inside the
// propagator and residual checks). Assembly happens in Eigen; this is the
// flat, kernel-friendly view of it.
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;  // size rows+1
    std::vector<int> col_idx;  // size nnz
    std::vector<cplx> vals;    // size nnz

    int nnz() const { return static_cast<int>(vals.size()); }

    static CsrMatrix from_eigen(const Eigen::SparseMatrix<cplx>& m) {
        Eigen::SparseMatrix<cplx, Eigen::RowMajor> rm(m);
        rm.makeCompressed();
        CsrMatrix out;
        out.rows = static_cast<int>(rm.rows());
        out.cols = static_cast<int>(rm.cols());
        out.row_ptr.assign(rm.outerIndexPtr(), rm.outerIndexPtr() + rm.rows() + 1);
        out.col_idx.assign(rm.innerIndexPtr(), rm.innerIndexPtr() + rm.nonZeros());
        out.vals.assign(rm.valuePtr(), rm.valuePtr() + rm.nonZeros());
        return out;
    }
};

} // namespace polcav::kernels
