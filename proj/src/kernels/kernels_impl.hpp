#pragma once

#include "bpinv/kernels.hpp"

namespace bpinv::kernels::detail {

const KernelTable& scalar_table() noexcept;
// nullptr when the AVX2 translation unit was not compiled for this target.
const KernelTable* avx2_table() noexcept;

}  // namespace bpinv::kernels::detail
