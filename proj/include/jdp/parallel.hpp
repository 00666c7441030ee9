#pragma once

namespace jdp {

/// Applies the PRICE_THREADS environment variable (if set and positive) as a
/// cap on the OpenMP worker count. Unset or invalid values leave the runtime
/// default untouched. Safe to call more than once.
void apply_thread_cap_from_env();

/// Worker count the parallel kernels will use (1 when built without OpenMP).
int max_threads();

}  // namespace jdp
