#include "sdde/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace sdde::kernels {

namespace {

const Dispatch* select() {
    if (const char* env = std::getenv("SDDE_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_table();
        if (std::strcmp(env, "avx2") == 0 && avx2_table()) return avx2_table();
        if (std::strcmp(env, "neon") == 0 && neon_table()) return neon_table();
        return &scalar_table(); // unknown or unavailable request: fail safe
    }
    if (const Dispatch* t = avx2_table()) return t;
    if (const Dispatch* t = neon_table()) return t;
    return &scalar_table();
}

} // namespace

const Dispatch& active() {
    static const Dispatch* table = select();
    return *table;
}

} // namespace sdde::kernels
