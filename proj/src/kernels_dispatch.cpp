#include <cstdlib>
#include <string>

#include "sumspace/error.hpp"
#include "sumspace/kernels.hpp"

namespace sumspace::kernels {

#if defined(SUMSPACE_HAVE_AVX2)
const Table& avx2_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(SUMSPACE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa pick_default() {
    const char* env = std::getenv("SUMSPACE_SIMD");
    std::string want = env ? env : "auto";
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && table_for(Isa::avx2)) return Isa::avx2;
    if (want == "neon" && table_for(Isa::neon)) return Isa::neon;
    if (table_for(Isa::avx2)) return Isa::avx2;
    if (table_for(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

struct State {
    Isa isa;
    const Table* table;
    State() : isa(pick_default()), table(table_for(isa)) {}
};

State& state() {
    static State s;
    return s;
}

}  // namespace

const Table* table_for(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return &scalar_table();
        case Isa::avx2:
#if defined(SUMSPACE_HAVE_AVX2)
            if (cpu_has_avx2()) return &avx2_table();
#endif
            return nullptr;
        case Isa::neon:
            // No NEON translation unit is built for this target.
            return nullptr;
    }
    return nullptr;
}

const Table& active() { return *state().table; }
Isa active_isa() { return state().isa; }

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

void force_isa(Isa isa) {
    const Table* t = table_for(isa);
    if (!t) throw InputError("SIMD variant not available: " + std::string(isa_name(isa)));
    state().isa = isa;
    state().table = t;
}

}  // namespace sumspace::kernels
