#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cifm::verify {

struct SweepResult
{
  explicit SweepResult( std::string name ) : suite( std::move( name ) ) {}

  std::string suite;
  std::uint64_t passed = 0u;
  std::uint64_t total = 0u;
  std::string unit = "cases";
  std::vector<std::string> failures; ///< first few failing cases

  bool ok() const noexcept { return total > 0u && passed == total; }
};

struct SweepOptions
{
  std::uint64_t seed = 0u;
  std::size_t count = 0u; ///< 0 selects the suite default
};

/// mul4-exhaustive, mul12-random, mul24-random, fp32-oracle, rev-roundtrip,
/// rev-expand, repair-all
const std::vector<std::string>& suite_names();

std::optional<SweepResult> run_suite( std::string_view name, const SweepOptions& options = {} );

/// Uniform width in [1, max_width], then a uniform value of that width, so
/// every checker class is exercised.
std::uint64_t random_operand( std::mt19937_64& rng, unsigned max_width );

/// Normal single-precision pattern with a random sign, exponent in
/// [1, 254] and fraction.
std::uint32_t random_normal( std::mt19937_64& rng );

} // namespace cifm::verify
