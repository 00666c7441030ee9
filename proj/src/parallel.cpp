#include "jdp/parallel.hpp"

#include <cstdlib>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace jdp {

void apply_thread_cap_from_env() {
#if defined(_OPENMP)
    const char* raw = std::getenv("PRICE_THREADS");
    if (raw == nullptr || *raw == '\0') return;
    try {
        int n = std::stoi(raw);
        if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
        // unparsable value: keep the runtime default
    }
#endif
}

int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace jdp
