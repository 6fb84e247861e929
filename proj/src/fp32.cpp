#include "cifm/fp32.hpp"

namespace cifm::fp {

std::string_view to_string( FpClass c )
{
  switch ( c )
  {
  case FpClass::Normal:
    return "NORMAL";
  case FpClass::Zero:
    return "ZERO";
  case FpClass::Subnormal:
    return "SUBNORMAL";
  case FpClass::Inf:
    return "INF";
  case FpClass::NaN:
    return "NAN";
  }
  return "?";
}

Fp32Parts unpack( std::uint32_t bits )
{
  Fp32Parts p;
  p.sign = ( bits >> 31 ) & 1u;
  p.exponent = ( bits >> 23 ) & 0xFFu;
  p.fraction = BitVec( 23u, bits & 0x7FFFFFu );
  if ( p.exponent == 0xFFu )
  {
    p.cls = p.fraction.value() == 0u ? FpClass::Inf : FpClass::NaN;
  }
  else if ( p.exponent == 0u )
  {
    p.cls = p.fraction.value() == 0u ? FpClass::Zero : FpClass::Subnormal;
  }
  else
  {
    p.cls = FpClass::Normal;
  }
  return p;
}

std::uint32_t pack( bool sign, unsigned exponent, std::uint32_t fraction )
{
  return ( std::uint32_t{ sign } << 31 ) | ( ( exponent & 0xFFu ) << 23 ) | ( fraction & 0x7FFFFFu );
}

FpMulResult fp_mul( std::uint32_t a, std::uint32_t b, std::span<const FaultSpec> faults, const RepairSet& repair,
                    Rounding rounding, const MulOptions& options )
{
  auto pa = unpack( a );
  auto pb = unpack( b );
  const bool sign = pa.sign != pb.sign;

  FpMulResult out;
  auto& tr = out.trace;

  for ( auto* p : { &pa, &pb } )
  {
    if ( p->cls == FpClass::Subnormal )
    {
      p->cls = FpClass::Zero;
      tr.flushed_input = true;
    }
  }

  // specials
  const auto ca = pa.cls, cb = pb.cls;
  if ( ca != FpClass::Normal || cb != FpClass::Normal )
  {
    tr.special = true;
    if ( ca == FpClass::NaN || cb == FpClass::NaN )
    {
      out.bits = canonical_nan;
    }
    else if ( ca == FpClass::Inf || cb == FpClass::Inf )
    {
      out.bits = ( ca == FpClass::Zero || cb == FpClass::Zero ) ? canonical_nan : pack( sign, 0xFFu, 0u );
    }
    else
    {
      out.bits = pack( sign, 0u, 0u );
    }
    return out;
  }

  tr.significand_a = BitVec( 24u, ( 1u << 23 ) | pa.fraction.value() );
  tr.significand_b = BitVec( 24u, ( 1u << 23 ) | pb.fraction.value() );

  auto m = mul24( tr.significand_a, tr.significand_b, faults, repair, options );
  tr.raw_product = m.product;
  tr.activity = std::move( m.activity );
  out.unrepaired = std::move( m.unrepaired );

  const auto raw = tr.raw_product.value();
  tr.exponent_pre_bias = static_cast<int>( pa.exponent + pb.exponent );
  int exponent = tr.exponent_pre_bias - bias;

  // the product of two [1, 2) significands lies in [1, 4): at most one shift
  unsigned drop = 23u;
  if ( ( raw >> 47 ) & 1u )
  {
    tr.normalized = true;
    ++exponent;
    drop = 24u;
  }
  std::uint64_t kept = raw >> drop;
  const std::uint64_t rest = raw & BitVec::mask( drop );
  const std::uint64_t half = std::uint64_t{ 1 } << ( drop - 1u );

  if ( rounding == Rounding::NearestEven && ( rest > half || ( rest == half && ( kept & 1u ) ) ) )
  {
    tr.rounding_applied = RoundingApplied::Increment;
    ++kept;
    if ( kept == ( std::uint64_t{ 1 } << 24 ) )
    {
      kept >>= 1;
      ++exponent;
    }
  }

  tr.exponent_final = exponent;
  if ( exponent >= 0xFF )
  {
    tr.overflow = true;
    out.bits = pack( sign, 0xFFu, 0u );
  }
  else if ( exponent <= 0 )
  {
    tr.underflow = true;
    out.bits = pack( sign, 0u, 0u );
  }
  else
  {
    out.bits = pack( sign, static_cast<unsigned>( exponent ), static_cast<std::uint32_t>( kept ) );
  }
  return out;
}

} // namespace cifm::fp
