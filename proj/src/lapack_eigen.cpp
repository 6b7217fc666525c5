#include "kharper/spectral.hpp"

#include <lapacke.h>

#include <mutex>

extern "C" void openblas_set_num_threads(int num_threads);

namespace kharper::detail {

GeneralEigenResult lapack_general_eigen(const MatrixXc& A, bool compute_vectors)
{
    // Worker threads call in concurrently; keep BLAS itself single-threaded so
    // results do not depend on the pool size.
    static std::once_flag blas_threads;
    std::call_once(blas_threads, [] { openblas_set_num_threads(1); });

    const lapack_int n = static_cast<lapack_int>(A.rows());
    GeneralEigenResult out;
    out.values.resize(n);
    if (n == 0)
        return out;
    MatrixXc work = A;
    if (compute_vectors)
        out.vectors.resize(n, n);
    auto* a = reinterpret_cast<lapack_complex_double*>(work.data());
    auto* w = reinterpret_cast<lapack_complex_double*>(out.values.data());
    auto* vr = compute_vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : nullptr;
    out.info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', compute_vectors ? 'V' : 'N', n, a, n, w,
                             nullptr, n, vr, n);
    return out;
}

} // namespace kharper::detail
