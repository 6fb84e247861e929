#include "cifm/json_io.hpp"
#include "cifm/multiplier.hpp"
#include "cifm/revlogic.hpp"

#include "oracle/bits.hpp"

#include <doctest.h>

using namespace cifm;
using namespace cifm::rev;

namespace {

std::uint32_t pattern( std::initializer_list<int> bits )
{
  std::uint32_t p = 0u;
  unsigned i = 0u;
  for ( auto b : bits )
  {
    p |= static_cast<std::uint32_t>( b & 1 ) << i++;
  }
  return p;
}

bool bijective( const RevGate& g )
{
  std::vector<bool> hit( g.mapping().size(), false );
  for ( std::uint32_t x = 0u; x < hit.size(); ++x )
  {
    const auto y = g.apply( x );
    if ( y >= hit.size() || hit[y] || g.invert( y ) != x )
    {
      return false;
    }
    hit[y] = true;
  }
  return true;
}

CellNetlist counted_netlist( unsigned f, unsigned h, unsigned g )
{
  // disjoint cells so that no net fans out
  NetlistBuilder b;
  std::vector<NetId> outs;
  for ( unsigned k = 0; k < f; ++k )
  {
    const auto x = b.add_input( "f" + std::to_string( k ), 3u );
    const auto o = b.add_cell( CellKind::FullAdder, x, level::first, "m" );
    outs.insert( outs.end(), o.begin(), o.end() );
  }
  for ( unsigned k = 0; k < h; ++k )
  {
    const auto x = b.add_input( "h" + std::to_string( k ), 2u );
    const auto o = b.add_cell( CellKind::HalfAdder, x, level::first, "m" );
    outs.insert( outs.end(), o.begin(), o.end() );
  }
  for ( unsigned k = 0; k < g; ++k )
  {
    const auto x = b.add_input( "g" + std::to_string( k ), 2u );
    outs.push_back( b.and2( x[0], x[1], level::partial_product, "m" ) );
  }
  b.add_output( "y", outs );
  return std::move( b ).finish();
}

} // namespace

TEST_CASE( "TSG embeds a full adder" )
{
  const auto tsg = make_tsg();
  CHECK( tsg.arity() == 4u );
  const auto y = tsg.apply( pattern( { 1, 1, 0, 1 } ) );
  CHECK( ( ( y >> 2 ) & 1u ) == 1u );
  CHECK( ( ( y >> 3 ) & 1u ) == 1u );
  const auto z = tsg.apply( 0u );
  CHECK( ( ( z >> 2 ) & 1u ) == 0u );
  CHECK( ( ( z >> 3 ) & 1u ) == 0u );
}

TEST_CASE( "New Gate embeds a half adder" )
{
  const auto ng = make_new_gate();
  const auto y = ng.apply( pattern( { 1, 1, 0 } ) );
  CHECK( ( ( y >> 1 ) & 1u ) == 1u );
  CHECK( ( ( y >> 2 ) & 1u ) == 0u );
  const auto z = ng.apply( pattern( { 1, 0, 0 } ) );
  CHECK( ( ( z >> 1 ) & 1u ) == 0u );
  CHECK( ( ( z >> 2 ) & 1u ) == 1u );
}

TEST_CASE( "standard gates" )
{
  const auto g = make_standard_gates();
  CHECK( g.toffoli.apply( pattern( { 1, 1, 0 } ) ) == pattern( { 1, 1, 1 } ) );
  CHECK( g.toffoli.apply( pattern( { 1, 0, 1 } ) ) == pattern( { 1, 0, 1 } ) );
  CHECK( g.feynman.apply( pattern( { 1, 0 } ) ) == pattern( { 1, 1 } ) );
  CHECK( g.feynman.apply( pattern( { 0, 1 } ) ) == pattern( { 0, 1 } ) );
  CHECK( g.fredkin.apply( pattern( { 1, 1, 0 } ) ) == pattern( { 1, 0, 1 } ) );
  CHECK( g.fredkin.apply( pattern( { 0, 1, 0 } ) ) == pattern( { 0, 1, 0 } ) );
  CHECK( g.not_gate.apply( 0u ) == 1u );
}

TEST_CASE( "every gate is a bijection" )
{
  const auto g = make_standard_gates();
  for ( const auto* gate : { &g.not_gate, &g.feynman, &g.toffoli, &g.fredkin } )
  {
    CHECK( bijective( *gate ) );
  }
  CHECK( bijective( make_tsg() ) );
  CHECK( bijective( make_new_gate() ) );
  for ( auto name : { "NOT", "FEYNMAN", "TOFFOLI", "FREDKIN", "NG", "TSG" } )
  {
    CHECK( gate_by_name( name )->name() == name );
    CHECK( bijective( *gate_by_name( name ) ) );
  }
  CHECK_THROWS_AS( gate_by_name( "PERES" ), contract_error );
}

TEST_CASE( "non-bijective tables are rejected" )
{
  CHECK_THROWS_AS( RevGate( "AND", 2u, { 0u, 0u, 0u, 1u } ), gate_error );
  CHECK_THROWS_AS( RevGate( "SHORT", 2u, { 0u, 1u, 2u } ), gate_error );
  CHECK_THROWS_AS( RevGate( "RANGE", 1u, { 0u, 2u } ), gate_error );
}

TEST_CASE( "full adder circuits: metrics and truth tables" )
{
  struct Row
  {
    FullAdderVariant variant;
    std::size_t gates, garbage, delay;
  };
  const Row rows[] = { { FullAdderVariant::Tsg, 1u, 2u, 1u },
                       { FullAdderVariant::NgNgFeynman, 3u, 3u, 3u },
                       { FullAdderVariant::NgToffoliFeynman, 3u, 2u, 3u },
                       { FullAdderVariant::Fredkin5, 5u, 5u, 5u } };
  for ( const auto& row : rows )
  {
    const auto nl = build_full_adder( row.variant );
    CHECK_NOTHROW( validate( nl ) );
    const auto m = metrics_of( nl );
    CHECK( m.gate_count == row.gates );
    CHECK( m.garbage_count == row.garbage );
    CHECK( m.unit_delay == row.delay );
    for ( std::uint64_t x = 0u; x < 8u; ++x )
    {
      const auto a = x & 1u, b = ( x >> 1 ) & 1u, c = ( x >> 2 ) & 1u;
      const auto out = read_outputs( nl, simulate( nl, { { "a", a }, { "b", b }, { "cin", c } } ) );
      CHECK( out.at( "sum" ) == ( ( a + b + c ) & 1u ) );
      CHECK( out.at( "carry" ) == ( ( a + b + c ) >> 1 ) );
    }
  }
}

TEST_CASE( "unit delay follows the longest dependency chain" )
{
  for ( std::size_t k = 1u; k <= 6u; ++k )
  {
    RevNetlist nl;
    auto prev = nl.add_input( "x", 0u );
    for ( std::size_t i = 0u; i < k; ++i )
    {
      const auto next = nl.add_ancilla( false );
      nl.apply( "FEYNMAN", { prev, next } );
      prev = next;
    }
    nl.output_roles[prev] = { RoleKind::PrimaryOutput, "y", 0u };
    CHECK( metrics_of( nl ).unit_delay == k );
    CHECK( metrics_of( nl ).gate_count == k );
  }

  // independent gates side by side stay at depth one
  RevNetlist wide;
  for ( unsigned i = 0u; i < 4u; ++i )
  {
    const auto x = wide.add_input( "x", i );
    const auto y = wide.add_ancilla( false );
    wide.apply( "FEYNMAN", { x, y } );
    wide.output_roles[y] = { RoleKind::PrimaryOutput, "y", i };
  }
  CHECK( metrics_of( wide ).unit_delay == 1u );
}

TEST_CASE( "gate application contracts" )
{
  RevNetlist nl;
  const auto a = nl.add_input( "a", 0u );
  const auto b = nl.add_ancilla( false );
  CHECK_THROWS_AS( nl.apply( "TOFFOLI", { a, b } ), contract_error );
  CHECK_THROWS_AS( nl.apply( "FEYNMAN", { a, a } ), contract_error );
  CHECK_THROWS_AS( nl.apply( "FEYNMAN", { a, 7u } ), contract_error );
  nl.output_roles.pop_back();
  CHECK_THROWS_AS( validate( nl ), contract_error );
}

TEST_CASE( "expanding an empty netlist" )
{
  const auto r = expand( CellNetlist{} );
  CHECK( r.gates.empty() );
  CHECK( metrics_of( r ) == Metrics{} );
}

TEST_CASE( "garbage accounting without fanout" )
{
  for ( unsigned f : { 0u, 1u, 3u } )
  {
    for ( unsigned h : { 0u, 2u } )
    {
      for ( unsigned g : { 0u, 1u, 4u } )
      {
        const auto m = metrics_of( expand( counted_netlist( f, h, g ) ) );
        CHECK( m.gate_count == f + h + g );
        CHECK( m.garbage_count == 2u * f + h + 2u * g );
        CHECK( m.ancilla_count == f + h + g );
      }
    }
  }
  const auto single = metrics_of( expand( counted_netlist( 1u, 0u, 0u ) ) );
  CHECK( single == Metrics{ 1u, 2u, 1u, 1u } );
}

TEST_CASE( "expanded 4x4 block matches the model exhaustively" )
{
  const auto r = expand( export_netlist( NetlistLevel::Mul4 ) );
  CHECK_NOTHROW( validate( r ) );
  for ( std::uint64_t a = 0u; a < 16u; ++a )
  {
    for ( std::uint64_t b = 0u; b < 16u; ++b )
    {
      const auto fin = simulate( r, { { "a", a }, { "b", b } } );
      REQUIRE( read_outputs( r, fin ).at( "p" ) == mul4( BitVec( 4u, a ), BitVec( 4u, b ) ).product.value() );
      REQUIRE( simulate_inverse( r, fin ) == initial_state( r, { { "a", a }, { "b", b } } ) );
    }
  }
}

TEST_CASE( "expansion of control cells" )
{
  NetlistBuilder b;
  const auto x = b.add_input( "x", 3u );
  const auto o = b.or2( x[0], x[1], level::control, "c" );
  const auto m = b.mux2( x[2], x[0], x[1], level::control, "c" );
  b.add_output( "y", { o, m } );
  const auto nl = std::move( b ).finish();
  const auto r = expand( nl );
  for ( std::uint64_t v = 0u; v < 8u; ++v )
  {
    const std::vector<std::uint64_t> in{ v };
    CHECK( read_outputs( r, simulate( r, { { "x", v } } ) ).at( "y" ) == evaluate_words( nl, in ).at( 0 ) );
  }
}

TEST_CASE( "inverse simulation restores arbitrary states" )
{
  const auto r = expand( export_netlist( NetlistLevel::Mul12 ) );
  std::mt19937_64 rng( 53 );
  for ( int k = 0; k < 100; ++k )
  {
    State s( r.lines.size() );
    for ( auto& v : s )
    {
      v = rng() & 1u;
    }
    auto t = s;
    run_forward( r, t );
    run_backward( r, t );
    REQUIRE( t == s );
  }
}

TEST_CASE( "expanded 24x24 datapath" )
{
  const auto r = expand( export_netlist( NetlistLevel::Mul24 ) );
  std::mt19937_64 rng( 59 );
  for ( int k = 0; k < 100; ++k )
  {
    const auto a = oracle::operand( rng, 24u ), b = oracle::operand( rng, 24u );
    const auto fin = simulate( r, { { "a", a }, { "b", b } } );
    REQUIRE( read_outputs( r, fin ).at( "p" ) == a * b );
  }
}

TEST_CASE( "restored constants are checked by simulation" )
{
  RevNetlist nl;
  const auto x = nl.add_input( "x", 0u );
  const auto z = nl.add_ancilla( false );
  nl.apply( "FEYNMAN", { x, z } );
  nl.apply( "FEYNMAN", { x, z } );
  nl.output_roles[x] = { RoleKind::PrimaryOutput, "y", 0u };
  nl.output_roles[z] = { RoleKind::RestoredConstant, {}, 0u };
  CHECK( restored_constants_hold( nl ) );
  CHECK( metrics_of( nl ).garbage_count == 0u );
  nl.gates.pop_back();
  CHECK_FALSE( restored_constants_hold( nl ) );
}

TEST_CASE( "reversible netlist json round trip" )
{
  const auto r = expand( export_netlist( NetlistLevel::Mul24 ) );
  const auto text = to_json( r ).dump();
  const auto back = rev_netlist_from_json( json::parse( text ) );
  CHECK( metrics_of( back ) == metrics_of( r ) );
  CHECK( to_json( back ).dump() == text );
  std::mt19937_64 rng( 61 );
  const std::uint64_t max = ( 1u << 24 ) - 1u;
  for ( int k = 0; k < 100; ++k )
  {
    const auto a = rng() & max, b = rng() & max;
    REQUIRE( read_outputs( back, simulate( back, { { "a", a }, { "b", b } } ) ).at( "p" ) ==
             mul24( BitVec( 24u, a ), BitVec( 24u, b ) ).product.value() );
  }

  auto j = to_json( build_full_adder( FullAdderVariant::Tsg ) );
  j["gates"][0]["name"] = "BOGUS";
  CHECK_THROWS( rev_netlist_from_json( j ) );
}

TEST_CASE( "metrics json keys" )
{
  const auto j = to_json( metrics_of( build_full_adder( FullAdderVariant::Tsg ) ) );
  CHECK( j.at( "No of Gates" ) == 1 );
  CHECK( j.at( "No of Garbage Outputs" ) == 2 );
  CHECK( j.at( "Unit Delay" ) == 1 );
}
