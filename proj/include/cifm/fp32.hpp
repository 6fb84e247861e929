#pragma once

#include "cifm/bitcore.hpp"
#include "cifm/multiplier.hpp"

#include <cstdint>
#include <span>

namespace cifm::fp {

enum class FpClass : std::uint8_t
{
  Normal,
  Zero,
  Subnormal,
  Inf,
  NaN
};

std::string_view to_string( FpClass c );

struct Fp32Parts
{
  bool sign = false;
  unsigned exponent = 0u;  ///< biased, 8 bits
  BitVec fraction{ 23u, 0u };
  FpClass cls = FpClass::Zero;
};

Fp32Parts unpack( std::uint32_t bits );
std::uint32_t pack( bool sign, unsigned exponent, std::uint32_t fraction );

constexpr std::uint32_t canonical_nan = 0x7FC00000u;
constexpr int bias = 127;

enum class Rounding : std::uint8_t
{
  NearestEven,
  Truncate
};

enum class RoundingApplied : std::uint8_t
{
  None,
  Increment
};

struct FpMulTrace
{
  BitVec significand_a{ 24u, 0u };
  BitVec significand_b{ 24u, 0u };
  BitVec raw_product{ 48u, 0u };
  bool normalized = false;       ///< product was shifted right by one
  int exponent_pre_bias = 0;     ///< e_a + e_b
  int exponent_final = 0;        ///< biased, before overflow/underflow handling
  RoundingApplied rounding_applied = RoundingApplied::None;
  bool special = false;          ///< result came from the specials table
  bool flushed_input = false;    ///< a subnormal operand was treated as zero
  bool overflow = false;
  bool underflow = false;        ///< result flushed to signed zero
  ActivityReport activity = ActivityReport::idle();
};

struct FpMulResult
{
  std::uint32_t bits = 0u;
  FpMulTrace trace;
  std::vector<ModuleId> unrepaired;
};

/*! \brief Single-precision multiply built around the 24x24 block.
 *
 * Sign XOR, exponent addition with bias correction, significand product on
 * the integer multiplier, at most one normalizing right shift, rounding and
 * packing. Subnormals are flushed to zero on input and output.
 */
FpMulResult fp_mul( std::uint32_t a, std::uint32_t b, std::span<const FaultSpec> faults = {},
                    const RepairSet& repair = {}, Rounding rounding = Rounding::NearestEven,
                    const MulOptions& options = {} );

} // namespace cifm::fp
