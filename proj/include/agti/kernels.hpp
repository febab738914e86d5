#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant picked at runtime from
// cpuid. AGTI_ISA=scalar in the environment pins the scalar path.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace agti::kernels {

enum class Isa { scalar, avx2 };

const char *isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;
// Pin an ISA for the process (tests, benchmarks); nullopt restores detection.
// Throws std::invalid_argument if the ISA is not available on this CPU.
void force_isa(std::optional<Isa> isa);

// Columns of 0/1 bytes, all the same length, classifier 1 first.
using Columns = std::span<const std::span<const std::uint8_t>>;

// Structure-of-arrays batch of three-classifier parameter points.
struct ThreeClassifierBatch {
  std::span<const double> prevalence;
  std::array<std::span<const double>, 3> acc_alpha;
  std::array<std::span<const double>, 3> acc_beta;

  std::size_t size() const noexcept { return prevalence.size(); }
};

// counts[pattern] += number of rows whose column bits spell `pattern`
// (classifier 1 most significant). counts.size() must be 2^columns.size().
void tally_columns(Columns columns, std::span<std::uint64_t> counts);

// out[k] = sum over the 8 patterns of (model(k) - observed)^2 for the
// independent three-classifier model at batch point k.
void forward3_sse(const ThreeClassifierBatch &batch,
                  std::span<const double, 8> observed, std::span<double> out);

namespace scalar {
void tally_columns(Columns columns, std::span<std::uint64_t> counts);
void forward3_sse(const ThreeClassifierBatch &batch,
                  std::span<const double, 8> observed, std::span<double> out);
}  // namespace scalar

#if defined(AGTI_HAVE_AVX2)
namespace avx2 {
void tally_columns(Columns columns, std::span<std::uint64_t> counts);
void forward3_sse(const ThreeClassifierBatch &batch,
                  std::span<const double, 8> observed, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace agti::kernels
