#pragma once

// Internal: per-backend Ops tables linked into the dispatcher.

#include "dreadfuzz/kernels.hpp"

namespace dreadfuzz::kernels::detail {

const Ops& scalar_ops();

#ifdef DREADFUZZ_HAVE_AVX2
const Ops& avx2_ops();
#endif

}  // namespace dreadfuzz::kernels::detail
