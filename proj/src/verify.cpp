#include "cifm/verify.hpp"

#include "cifm/fp32.hpp"
#include "cifm/multiplier.hpp"
#include "cifm/revlogic.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace cifm::verify {

namespace {

constexpr std::size_t max_failures_kept = 5u;

void check( SweepResult& r, bool ok, const std::function<std::string()>& describe )
{
  ++r.total;
  if ( ok )
  {
    ++r.passed;
  }
  else if ( r.failures.size() < max_failures_kept )
  {
    r.failures.push_back( describe() );
  }
}

std::string hex( std::uint64_t v )
{
  std::ostringstream os;
  os << "0x" << std::hex << std::uppercase << v;
  return os.str();
}

SweepResult mul4_exhaustive( const SweepOptions& )
{
  SweepResult r( "mul4-exhaustive" );
  for ( std::uint64_t a = 0u; a < 16u; ++a )
  {
    for ( std::uint64_t b = 0u; b < 16u; ++b )
    {
      const auto p = mul4( BitVec( 4u, a ), BitVec( 4u, b ) ).product.value();
      check( r, p == a * b, [&] { return hex( a ) + "*" + hex( b ) + " -> " + hex( p ); } );
    }
  }
  r.unit = "pairs";
  return r;
}

std::vector<std::uint64_t> boundary24() { return { 0u, 1u, 0xFFFu, 0x1000u, 0xFFFFFFu }; }

SweepResult mul_random( unsigned width, const SweepOptions& o )
{
  SweepResult r( width == 12u ? "mul12-random" : "mul24-random" );
  r.unit = "pairs";
  std::mt19937_64 rng( o.seed );
  const auto n = o.count ? o.count : 10000u;

  auto one = [&]( std::uint64_t a, std::uint64_t b ) {
    const auto p = width == 12u ? mul12( BitVec( 12u, a ), BitVec( 12u, b ) ).product.value()
                                : mul24( BitVec( 24u, a ), BitVec( 24u, b ) ).product.value();
    check( r, p == a * b, [&] { return hex( a ) + "*" + hex( b ) + " -> " + hex( p ); } );
  };

  for ( std::size_t i = 0u; i < n; ++i )
  {
    one( random_operand( rng, width ), random_operand( rng, width ) );
  }
  for ( auto a : boundary24() )
  {
    for ( auto b : boundary24() )
    {
      if ( a < ( std::uint64_t{ 1 } << width ) && b < ( std::uint64_t{ 1 } << width ) )
      {
        one( a, b );
      }
    }
  }
  return r;
}

SweepResult fp32_oracle( const SweepOptions& o )
{
  SweepResult r( "fp32-oracle" );
  std::mt19937_64 rng( o.seed );
  const auto n = o.count ? o.count : 10000u;

  // host IEEE multiply as the reference for normal results
  while ( r.total < n )
  {
    const auto a = random_normal( rng ), b = random_normal( rng );
    const float ref = std::bit_cast<float>( a ) * std::bit_cast<float>( b );
    if ( std::fpclassify( ref ) != FP_NORMAL )
    {
      continue;
    }
    const auto got = fp::fp_mul( a, b ).bits;
    const auto want = std::bit_cast<std::uint32_t>( ref );
    check( r, got == want, [&] { return hex( a ) + "*" + hex( b ) + " -> " + hex( got ) + " want " + hex( want ); } );
  }

  const std::uint32_t specials[][3] = {
      { 0x7FC00000u, 0x3F800000u, fp::canonical_nan }, // NaN propagates
      { 0x7F800000u, 0x00000000u, fp::canonical_nan }, // Inf * 0
      { 0xFF800000u, 0x40000000u, 0xFF800000u },       // -Inf * 2
      { 0x00000000u, 0xC0400000u, 0x80000000u },       // 0 * -3
      { 0x00000001u, 0x3F800000u, 0x00000000u },       // subnormal flushed
  };
  for ( const auto& s : specials )
  {
    const auto got = fp::fp_mul( s[0], s[1] ).bits;
    check( r, got == s[2], [&] { return "special " + hex( s[0] ) + "*" + hex( s[1] ) + " -> " + hex( got ); } );
  }
  return r;
}

SweepResult rev_roundtrip( const SweepOptions& o )
{
  SweepResult r( "rev-roundtrip" );
  r.unit = "round trips";
  const auto rev4 = rev::expand( export_netlist( NetlistLevel::Mul4 ) );
  for ( std::uint64_t x = 0u; x < 256u; ++x )
  {
    const auto init = rev::initial_state( rev4, std::map<std::string, std::uint64_t>{ { "a", x & 0xFu }, { "b", x >> 4 } } );
    auto s = init;
    rev::run_forward( rev4, s );
    check( r, rev::simulate_inverse( rev4, s ) == init, [&] { return "mul4 input " + hex( x ); } );
  }

  // the inverse must also hold off the legal input space: random full line
  // states, ancillas included
  std::mt19937_64 rng( o.seed );
  for ( std::size_t i = 0u; i < 65536u; ++i )
  {
    rev::State init( rev4.lines.size() );
    for ( auto& v : init )
    {
      v = rng() & 1u;
    }
    auto s = init;
    rev::run_forward( rev4, s );
    check( r, rev::simulate_inverse( rev4, s ) == init, [&] { return "mul4 arbitrary state #" + std::to_string( i ); } );
  }

  const auto rev24 = rev::expand( export_netlist( NetlistLevel::Mul24 ) );
  const auto n = o.count ? o.count : 1000u;
  for ( std::size_t i = 0u; i < n; ++i )
  {
    const auto a = rng() & 0xFFFFFFu, b = rng() & 0xFFFFFFu;
    const auto init = rev::initial_state( rev24, std::map<std::string, std::uint64_t>{ { "a", a }, { "b", b } } );
    auto s = init;
    rev::run_forward( rev24, s );
    check( r, rev::simulate_inverse( rev24, s ) == init, [&] { return "mul24 " + hex( a ) + "*" + hex( b ); } );
  }
  return r;
}

SweepResult rev_expand( const SweepOptions& o )
{
  SweepResult r( "rev-expand" );
  r.unit = "pairs";
  const auto rev4 = rev::expand( export_netlist( NetlistLevel::Mul4 ) );
  for ( std::uint64_t a = 0u; a < 16u; ++a )
  {
    for ( std::uint64_t b = 0u; b < 16u; ++b )
    {
      const auto p = rev::read_outputs( rev4, rev::simulate( rev4, { { "a", a }, { "b", b } } ) ).at( "p" );
      check( r, p == mul4( BitVec( 4u, a ), BitVec( 4u, b ) ).product.value(),
             [&] { return "mul4 " + hex( a ) + "*" + hex( b ); } );
    }
  }

  const auto rev24 = rev::expand( export_netlist( NetlistLevel::Mul24 ) );
  std::mt19937_64 rng( o.seed );
  const auto n = o.count ? o.count : 1000u;
  for ( std::size_t i = 0u; i < n; ++i )
  {
    const auto a = random_operand( rng, 24u ), b = random_operand( rng, 24u );
    const auto p = rev::read_outputs( rev24, rev::simulate( rev24, { { "a", a }, { "b", b } } ) ).at( "p" );
    check( r, p == mul24( BitVec( 24u, a ), BitVec( 24u, b ) ).product.value(),
           [&] { return "mul24 " + hex( a ) + "*" + hex( b ); } );
  }
  return r;
}

SweepResult repair_all( const SweepOptions& o )
{
  SweepResult r( "repair-all" );
  r.unit = "module positions repaired";
  std::mt19937_64 rng( o.seed );
  const auto n = o.count ? o.count : 1000u;

  for ( auto q : all_quadrants )
  {
    for ( int i = 0; i < 3; ++i )
    {
      for ( int j = 0; j < 3; ++j )
      {
        const auto id = ModuleId::block( q, i, j );
        const FaultSpec fault{ id, BitVec( 8u, rng() & 0xFFu ) };
        RepairSet repair{};
        repair[static_cast<int>( q )] = RepairConfig::on( id );

        bool repaired = true, exposed = false;
        for ( std::size_t k = 0u; k < n; ++k )
        {
          const auto a = rng() & 0xFFFFFFu, b = rng() & 0xFFFFFFu;
          const BitVec av( 24u, a ), bv( 24u, b );
          repaired = repaired && mul24( av, bv, { &fault, 1u }, repair ).product.value() == a * b;
          exposed = exposed || mul24( av, bv, { &fault, 1u } ).product.value() != a * b;
        }
        check( r, repaired && exposed, [&] {
          return id.to_string() + ( repaired ? "" : " not repaired" ) + ( exposed ? "" : " fault never observed" );
        } );
      }
    }
  }
  return r;
}

} // namespace

std::uint64_t random_operand( std::mt19937_64& rng, unsigned max_width )
{
  const auto w = 1u + static_cast<unsigned>( rng() % max_width );
  return rng() & ( ( std::uint64_t{ 1 } << w ) - 1u );
}

std::uint32_t random_normal( std::mt19937_64& rng )
{
  const auto sign = static_cast<std::uint32_t>( rng() & 1u );
  const auto exponent = 1u + static_cast<std::uint32_t>( rng() % 254u );
  const auto fraction = static_cast<std::uint32_t>( rng() & 0x7FFFFFu );
  return fp::pack( sign, exponent, fraction );
}

const std::vector<std::string>& suite_names()
{
  static const std::vector<std::string> names{ "mul4-exhaustive", "mul12-random", "mul24-random", "fp32-oracle",
                                               "rev-roundtrip",   "rev-expand",   "repair-all" };
  return names;
}

std::optional<SweepResult> run_suite( std::string_view name, const SweepOptions& options )
{
  if ( name == "mul4-exhaustive" )
    return mul4_exhaustive( options );
  if ( name == "mul12-random" )
    return mul_random( 12u, options );
  if ( name == "mul24-random" )
    return mul_random( 24u, options );
  if ( name == "fp32-oracle" )
    return fp32_oracle( options );
  if ( name == "rev-roundtrip" )
    return rev_roundtrip( options );
  if ( name == "rev-expand" )
    return rev_expand( options );
  if ( name == "repair-all" )
    return repair_all( options );
  return std::nullopt;
}

} // namespace cifm::verify
