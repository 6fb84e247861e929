#include "cifm/multiplier.hpp"

#include "oracle/bits.hpp"

#include <doctest.h>

#include <algorithm>

using namespace cifm;

namespace {

MulResult m24( std::uint64_t a, std::uint64_t b, std::span<const FaultSpec> faults = {}, const RepairSet& repair = {},
               const MulOptions& o = {} )
{
  return mul24( BitVec( 24u, a ), BitVec( 24u, b ), faults, repair, o );
}

MulResult m12( std::uint64_t a, std::uint64_t b, std::span<const FaultSpec> faults = {}, const RepairConfig& repair = {} )
{
  return mul12( BitVec( 12u, a ), BitVec( 12u, b ), faults, repair );
}

} // namespace

TEST_CASE( "mul4 is exact on every operand pair" )
{
  CHECK( mul4( BitVec( 4u, 15u ), BitVec( 4u, 15u ) ).product == BitVec( 8u, 225u ) );
  CHECK( mul4( BitVec( 4u, 0u ), BitVec( 4u, 13u ) ).product.value() == 0u );
  for ( std::uint64_t a = 0u; a < 16u; ++a )
  {
    for ( std::uint64_t b = 0u; b < 16u; ++b )
    {
      REQUIRE( mul4( BitVec( 4u, a ), BitVec( 4u, b ) ).product.value() == a * b );
    }
  }
  CHECK_THROWS_AS( mul4( BitVec( 8u, 1u ), BitVec( 4u, 1u ) ), contract_error );
}

TEST_CASE( "mul12 examples" )
{
  CHECK( m12( 4095u, 4095u ).product.value() == 16769025u );

  const auto small = m12( 9u, 11u );
  CHECK( small.product.value() == 99u );
  CHECK( small.activity.active_mul4 == std::set<ModuleId>{ ModuleId::block( Quadrant::LL, 0, 0 ) } );
  CHECK( small.activity.power_proxy == 1 );

  const FaultSpec fault{ ModuleId::block( Quadrant::LL, 0, 0 ), BitVec( 8u, 0xFFu ) };
  const auto fixed = m12( 4095u, 4095u, { &fault, 1u }, RepairConfig::on( fault.target ) );
  CHECK( fixed.product.value() == 16769025u );
  CHECK( fixed.activity.disabled_faulty == std::set<ModuleId>{ fault.target } );
  CHECK( fixed.activity.active_mul4.contains( ModuleId::spare( Quadrant::LL ) ) );
  CHECK( fixed.activity.power_proxy == 9 );
  CHECK( fixed.unrepaired.empty() );

  const auto broken = m12( 4095u, 4095u, { &fault, 1u } );
  CHECK( broken.product.value() != 16769025u );
  CHECK( broken.unrepaired == std::vector<ModuleId>{ fault.target } );
}

TEST_CASE( "mul24 examples" )
{
  const std::uint64_t max = ( 1u << 24 ) - 1u;
  CHECK( m24( max, max ).product.value() == 281474943156225ull );
  CHECK( m24( max, max ).activity.power_proxy == 36 );

  const auto r = m24( 0xABCu, 0xDEFu );
  CHECK( r.product.value() == 0xABCull * 0xDEFull );
  for ( const auto& id : r.activity.active_mul4 )
  {
    CHECK( id.quadrant == Quadrant::LL );
  }
  CHECK( r.activity.power_proxy == 9 );

  CHECK( m24( 3u, 5u ).activity.power_proxy == 1 );

  std::mt19937_64 rng( 11 );
  for ( int k = 0; k < 200; ++k )
  {
    const auto x = rng() & max;
    CHECK( m24( 1u, x ).product.value() == x );
    CHECK( m24( x, 1u ).product.value() == x );
  }
}

TEST_CASE( "mul12 and mul24 match native multiplication" )
{
  std::mt19937_64 rng( 5 );
  for ( int k = 0; k < 3000; ++k )
  {
    const auto a = oracle::operand( rng, 12u ), b = oracle::operand( rng, 12u );
    REQUIRE( m12( a, b ).product.value() == a * b );
    const auto c = oracle::operand( rng, 24u ), d = oracle::operand( rng, 24u );
    REQUIRE( m24( c, d ).product.value() == c * d );
  }
}

TEST_CASE( "gating never changes the product" )
{
  std::mt19937_64 rng( 7 );
  MulOptions off;
  off.gating = false;
  for ( int k = 0; k < 2000; ++k )
  {
    const auto a = oracle::operand( rng, 24u ), b = oracle::operand( rng, 24u );
    const auto on = m24( a, b );
    const auto all = m24( a, b, {}, {}, off );
    REQUIRE( on.product == all.product );
    REQUIRE( all.activity.power_proxy == 36 );
    REQUIRE( on.activity.power_proxy <= 36 );
  }
}

TEST_CASE( "widening an operand never reduces activity" )
{
  std::mt19937_64 rng( 9 );
  for ( int k = 0; k < 500; ++k )
  {
    const auto a = oracle::operand( rng, 23u ), b = oracle::operand( rng, 24u );
    const auto wider = a | ( std::uint64_t{ 1 } << ( 23u - rng() % 12u ) );
    REQUIRE( m24( wider, b ).activity.power_proxy >= m24( a, b ).activity.power_proxy );
  }
}

TEST_CASE( "activity sets partition the 40 blocks" )
{
  std::mt19937_64 rng( 13 );
  for ( int k = 0; k < 300; ++k )
  {
    const auto a = oracle::operand( rng, 24u ), b = oracle::operand( rng, 24u );
    std::vector<FaultSpec> faults;
    RepairSet repair{};
    if ( k % 2 )
    {
      const auto q = all_quadrants[rng() % 4u];
      const auto id = ModuleId::block( q, static_cast<int>( rng() % 3u ), static_cast<int>( rng() % 3u ) );
      faults.push_back( { id, BitVec( 8u, rng() & 0xFFu ) } );
      repair[static_cast<int>( q )] = RepairConfig::on( id );
    }
    const auto act = m24( a, b, faults, repair ).activity;

    std::vector<ModuleId> seen;
    for ( const auto* s : { &act.active_mul4, &act.gated_mul4, &act.disabled_faulty } )
    {
      seen.insert( seen.end(), s->begin(), s->end() );
    }
    std::sort( seen.begin(), seen.end() );
    REQUIRE( std::adjacent_find( seen.begin(), seen.end() ) == seen.end() );
    auto every = all_blocks();
    std::sort( every.begin(), every.end() );
    REQUIRE( seen == every );
    REQUIRE( act.power_proxy == static_cast<int>( act.active_mul4.size() ) );
    REQUIRE( m24( a, b, faults, repair ).product.value() == a * b );
  }
}

TEST_CASE( "every block position can be repaired" )
{
  std::mt19937_64 rng( 17 );
  const std::uint64_t max = ( 1u << 24 ) - 1u;
  for ( const auto& id : all_blocks() )
  {
    if ( id.redundant )
    {
      continue;
    }
    const FaultSpec fault{ id, BitVec( 8u, 0xA5u ) };
    RepairSet repair{};
    repair[static_cast<int>( id.quadrant )] = RepairConfig::on( id );
    for ( int k = 0; k < 100; ++k )
    {
      const auto a = rng() & max, b = rng() & max;
      REQUIRE( m24( a, b, { &fault, 1u }, repair ).product.value() == a * b );
    }
    // all-ones operands give every block the product 0xE1, never 0xA5
    CHECK( m24( max, max, { &fault, 1u } ).product.value() != max * max );
  }
}

TEST_CASE( "configuration errors" )
{
  RepairConfig bad;
  bad.target = ModuleId::block( Quadrant::LL, 1, 1 );
  CHECK_THROWS_AS( m12( 1u, 1u, {}, bad ), config_error );

  RepairConfig no_target;
  no_target.enabled = true;
  CHECK_THROWS_AS( m12( 1u, 1u, {}, no_target ), config_error );

  const FaultSpec wrong_quadrant{ ModuleId::block( Quadrant::HH, 0, 0 ), BitVec( 8u, 0u ) };
  CHECK_THROWS_AS( m12( 1u, 1u, { &wrong_quadrant, 1u } ), config_error );

  const FaultSpec dup[] = { { ModuleId::block( Quadrant::LL, 0, 0 ), BitVec( 8u, 0u ) },
                            { ModuleId::block( Quadrant::LL, 0, 0 ), BitVec( 8u, 1u ) } };
  CHECK_THROWS_AS( m24( 1u, 1u, dup ), config_error );

  const FaultSpec spare{ ModuleId::spare( Quadrant::LL ), BitVec( 8u, 0u ) };
  CHECK_THROWS_AS( m24( 1u, 1u, { &spare, 1u } ), config_error );
}

TEST_CASE( "two faults with one spare leave one unrepaired" )
{
  const FaultSpec faults[] = { { ModuleId::block( Quadrant::HL, 0, 0 ), BitVec( 8u, 0u ) },
                               { ModuleId::block( Quadrant::HL, 2, 1 ), BitVec( 8u, 0u ) } };
  RepairSet repair{};
  repair[static_cast<int>( Quadrant::HL )] = RepairConfig::on( faults[0].target );
  const std::uint64_t max = ( 1u << 24 ) - 1u;
  const auto r = m24( max, max, faults, repair );
  CHECK( r.unrepaired == std::vector<ModuleId>{ faults[1].target } );
  CHECK( r.product.value() != max * max );
}

TEST_CASE( "exported block netlist" )
{
  const auto a = export_netlist( NetlistLevel::Mul4 );
  const auto b = export_netlist( NetlistLevel::Mul4 );
  CHECK( a.cells.size() == b.cells.size() );
  CHECK( std::count_if( a.cells.begin(), a.cells.end(), []( const Cell& c ) { return c.kind == CellKind::And; } ) ==
         16 );
  std::set<int> adder_levels;
  for ( const auto& c : a.cells )
  {
    if ( c.kind != CellKind::And )
    {
      adder_levels.insert( c.level );
    }
  }
  CHECK( adder_levels == std::set<int>{ 1, 2, 3 } );

  const std::vector<std::uint64_t> in{ 7u, 6u };
  CHECK( evaluate_words( a, in ).at( 0 ) == 42u );
}

TEST_CASE( "exported 12x12 and 24x24 netlists match the model" )
{
  const auto n12 = export_netlist( NetlistLevel::Mul12 );
  const auto n24 = export_netlist( NetlistLevel::Mul24 );
  CHECK_NOTHROW( validate( n12 ) );
  CHECK_NOTHROW( validate( n24 ) );
  std::mt19937_64 rng( 19 );
  for ( int k = 0; k < 1000; ++k )
  {
    const auto a = oracle::operand( rng, 12u ), b = oracle::operand( rng, 12u );
    const std::vector<std::uint64_t> in{ a, b };
    REQUIRE( evaluate_words( n12, in ).at( 0 ) == m12( a, b ).product.value() );
  }
  for ( int k = 0; k < 200; ++k )
  {
    const auto a = oracle::operand( rng, 24u ), b = oracle::operand( rng, 24u );
    const std::vector<std::uint64_t> in{ a, b };
    REQUIRE( evaluate_words( n24, in ).at( 0 ) == a * b );
  }
}

TEST_CASE( "level activity in a block" )
{
  MulOptions o;
  o.trace = true;
  const auto zero = mul4( BitVec( 4u, 0u ), BitVec( 4u, 0u ), o );
  CHECK( adder_levels_active( zero.netlist_trace->begin()->second ) == 0 );
  const auto full = mul4( BitVec( 4u, 15u ), BitVec( 4u, 15u ), o );
  CHECK( adder_levels_active( full.netlist_trace->begin()->second ) == 3 );
}

TEST_CASE( "featured netlist computes the same products" )
{
  const auto f24 = export_featured_netlist( NetlistLevel::Mul24 );
  const auto plain = export_netlist( NetlistLevel::Mul24 );
  CHECK_NOTHROW( validate( f24 ) );
  CHECK( f24.cells.size() > plain.cells.size() );
  std::mt19937_64 rng( 23 );
  for ( int k = 0; k < 200; ++k )
  {
    const auto a = oracle::operand( rng, 24u ), b = oracle::operand( rng, 24u );
    const auto in = featured_input_words( NetlistLevel::Mul24, a, b );
    REQUIRE( evaluate_words( f24, in ).at( 0 ) == a * b );
  }
  CHECK_THROWS( export_featured_netlist( NetlistLevel::Mul4 ) );
}

TEST_CASE( "featured netlist repairs an injected block fault" )
{
  const auto f24 = export_featured_netlist( NetlistLevel::Mul24 );
  std::mt19937_64 rng( 29 );
  const std::uint64_t max = ( 1u << 24 ) - 1u;
  for ( const auto& id : all_blocks() )
  {
    if ( id.redundant )
    {
      continue;
    }
    const FaultSpec fault{ id, BitVec( 8u, 0x3Cu ) };
    const auto overrides = fault_overrides( f24, { &fault, 1u } );
    RepairSet repair{};
    repair[static_cast<int>( id.quadrant )] = RepairConfig::on( id );
    for ( int k = 0; k < 20; ++k )
    {
      const auto a = rng() & max, b = rng() & max;
      REQUIRE( evaluate_words( f24, featured_input_words( NetlistLevel::Mul24, a, b, repair ), overrides ).at( 0 ) ==
               a * b );
      // unrepaired, the netlist and the behavioural model fail identically
      REQUIRE( evaluate_words( f24, featured_input_words( NetlistLevel::Mul24, a, b ), overrides ).at( 0 ) ==
               m24( a, b, { &fault, 1u } ).product.value() );
    }
  }
}

TEST_CASE( "module id formatting" )
{
  CHECK( ModuleId::block( Quadrant::LL, 1, 2 ).to_string() == "LL:1:2" );
  CHECK( ModuleId::spare( Quadrant::HH ).to_string() == "HH:R" );
  CHECK( all_blocks().size() == 40u );
  CHECK( quadrant_from_string( "LH" ) == Quadrant::LH );
  CHECK_FALSE( quadrant_from_string( "XX" ).has_value() );
}
