#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "agti/kernels.hpp"

namespace agti::kernels {
namespace {

Isa detect() noexcept {
  if (const char *env = std::getenv("AGTI_ISA"); env && std::string_view(env) == "scalar")
    return Isa::scalar;
#if defined(AGTI_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa> &current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char *isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  if (isa == Isa::scalar) return true;
#if defined(AGTI_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    current().store(detect());
    return;
  }
  if (!isa_available(*isa))
    throw std::invalid_argument(std::string("ISA not available: ") + isa_name(*isa));
  current().store(*isa);
}

void tally_columns(Columns columns, std::span<std::uint64_t> counts) {
#if defined(AGTI_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::tally_columns(columns, counts);
#endif
  scalar::tally_columns(columns, counts);
}

void forward3_sse(const ThreeClassifierBatch &batch,
                  std::span<const double, 8> observed, std::span<double> out) {
#if defined(AGTI_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::forward3_sse(batch, observed, out);
#endif
  scalar::forward3_sse(batch, observed, out);
}

}  // namespace agti::kernels
