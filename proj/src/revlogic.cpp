#include "cifm/revlogic.hpp"

#include "cifm/bitcore.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <utility>

namespace cifm::rev {

namespace {

using BitFn = std::function<std::uint32_t( std::uint32_t )>;

RevGate from_function( std::string name, unsigned arity, const BitFn& fn )
{
  std::vector<std::uint32_t> mapping( std::size_t{ 1 } << arity );
  for ( std::uint32_t x = 0u; x < mapping.size(); ++x )
  {
    mapping[x] = fn( x );
  }
  return RevGate( std::move( name ), arity, std::move( mapping ) );
}

constexpr std::uint32_t bit( std::uint32_t x, unsigned i ) { return ( x >> i ) & 1u; }

} // namespace

RevGate::RevGate( std::string name, unsigned arity, std::vector<std::uint32_t> mapping )
    : name_( std::move( name ) ), arity_( arity ), forward_( std::move( mapping ) )
{
  if ( arity == 0u || arity > 16u || forward_.size() != ( std::size_t{ 1 } << arity ) )
  {
    throw gate_error( name_ + ": truth table size does not match arity" );
  }
  inverse_.assign( forward_.size(), 0u );
  std::vector<std::uint8_t> hit( forward_.size(), 0u );
  for ( std::uint32_t x = 0u; x < forward_.size(); ++x )
  {
    const auto y = forward_[x];
    if ( y >= forward_.size() || hit[y] )
    {
      throw gate_error( name_ + ": mapping is not a bijection" );
    }
    hit[y] = 1u;
    inverse_[y] = x;
  }
}

RevGate make_tsg()
{
  auto gate = from_function( "TSG", 4u, []( std::uint32_t x ) {
    const auto a = bit( x, 0 ), b = bit( x, 1 ), c = bit( x, 2 ), d = bit( x, 3 );
    const auto p = a;
    const auto q = ( ( a ^ 1u ) & ( c ^ 1u ) ) ^ ( b ^ 1u );
    const auto r = q ^ d;
    const auto s = ( q & d ) ^ ( ( a & b ) ^ c );
    return p | ( q << 1 ) | ( r << 2 ) | ( s << 3 );
  } );

  // with C = 0 and D = cin, R/S must be the full-adder sum/carry
  for ( std::uint32_t x = 0u; x < 8u; ++x )
  {
    const bool a = bit( x, 0 ), b = bit( x, 1 ), cin = bit( x, 2 );
    const auto y = gate.apply( a | ( b << 1 ) | ( cin << 3 ) );
    const auto expect = full_add( a, b, cin );
    if ( bit( y, 2 ) != expect.sum || bit( y, 3 ) != expect.carry )
    {
      throw gate_error( "TSG does not embed a full adder" );
    }
  }
  return gate;
}

RevGate make_new_gate()
{
  auto gate = from_function( "NG", 3u, []( std::uint32_t x ) {
    const auto a = bit( x, 0 ), b = bit( x, 1 ), c = bit( x, 2 );
    const auto p = a;
    const auto q = ( a & b ) ^ c;
    const auto r = ( ( a ^ 1u ) & ( c ^ 1u ) ) ^ ( b ^ 1u );
    return p | ( q << 1 ) | ( r << 2 );
  } );

  // with C = 0: Q carry, R sum
  for ( std::uint32_t x = 0u; x < 4u; ++x )
  {
    const bool a = bit( x, 0 ), b = bit( x, 1 );
    const auto y = gate.apply( x );
    const auto expect = half_add( a, b );
    if ( bit( y, 1 ) != expect.carry || bit( y, 2 ) != expect.sum )
    {
      throw gate_error( "New Gate does not embed a half adder" );
    }
  }
  return gate;
}

StandardGates make_standard_gates()
{
  return {
      from_function( "NOT", 1u, []( std::uint32_t x ) { return x ^ 1u; } ),
      from_function( "FEYNMAN", 2u, []( std::uint32_t x ) { return x ^ ( bit( x, 0 ) << 1 ); } ),
      from_function( "TOFFOLI", 3u, []( std::uint32_t x ) { return x ^ ( ( bit( x, 0 ) & bit( x, 1 ) ) << 2 ); } ),
      from_function( "FREDKIN", 3u,
                     []( std::uint32_t x ) {
                       if ( !bit( x, 0 ) )
                       {
                         return x;
                       }
                       return 1u | ( bit( x, 2 ) << 1 ) | ( bit( x, 1 ) << 2 );
                     } ),
  };
}

std::shared_ptr<const RevGate> gate_by_name( std::string_view name )
{
  static const auto library = [] {
    std::map<std::string, std::shared_ptr<const RevGate>, std::less<>> lib;
    auto std_gates = make_standard_gates();
    for ( auto* g : { &std_gates.not_gate, &std_gates.feynman, &std_gates.toffoli, &std_gates.fredkin } )
    {
      auto name = g->name();
      lib.emplace( std::move( name ), std::make_shared<const RevGate>( std::move( *g ) ) );
    }
    lib.emplace( "NG", std::make_shared<const RevGate>( make_new_gate() ) );
    lib.emplace( "TSG", std::make_shared<const RevGate>( make_tsg() ) );
    return lib;
  }();

  const auto it = library.find( name );
  if ( it == library.end() )
  {
    throw contract_error( "unknown reversible gate " + std::string( name ) );
  }
  return it->second;
}

std::size_t RevNetlist::add_input( std::string port, unsigned b )
{
  lines.push_back( { LineTag::PrimaryInput, false, std::move( port ), b } );
  output_roles.emplace_back();
  return lines.size() - 1u;
}

std::size_t RevNetlist::add_ancilla( bool constant )
{
  lines.push_back( { LineTag::Ancilla, constant, {}, 0u } );
  output_roles.emplace_back();
  return lines.size() - 1u;
}

void RevNetlist::apply( std::shared_ptr<const RevGate> gate, std::vector<std::size_t> on )
{
  if ( on.size() != gate->arity() )
  {
    throw contract_error( gate->name() + " applied to the wrong number of lines" );
  }
  if ( std::set<std::size_t>( on.begin(), on.end() ).size() != on.size() )
  {
    throw contract_error( gate->name() + " applied to repeated lines" );
  }
  for ( auto l : on )
  {
    if ( l >= lines.size() )
    {
      throw contract_error( "gate line index out of range" );
    }
  }
  gates.push_back( { std::move( gate ), std::move( on ) } );
}

void RevNetlist::apply( std::string_view gate_name, std::vector<std::size_t> on )
{
  apply( gate_by_name( gate_name ), std::move( on ) );
}

void validate( const RevNetlist& netlist )
{
  if ( netlist.output_roles.size() != netlist.lines.size() )
  {
    throw contract_error( "output role table does not cover every line" );
  }
  for ( const auto& g : netlist.gates )
  {
    if ( !g.gate || g.lines.size() != g.gate->arity() )
    {
      throw contract_error( "gate application arity mismatch" );
    }
    if ( std::set<std::size_t>( g.lines.begin(), g.lines.end() ).size() != g.lines.size() )
    {
      throw contract_error( g.gate->name() + " applied to repeated lines" );
    }
    for ( auto l : g.lines )
    {
      if ( l >= netlist.lines.size() )
      {
        throw contract_error( "gate line index out of range" );
      }
    }
  }
  for ( std::size_t i = 0u; i < netlist.lines.size(); ++i )
  {
    if ( netlist.output_roles[i].kind == RoleKind::RestoredConstant && netlist.lines[i].tag != LineTag::Ancilla )
    {
      throw contract_error( "only ancilla lines can be restored constants" );
    }
  }
}

State initial_state( const RevNetlist& netlist, std::span<const std::uint8_t> primary_inputs )
{
  State s( netlist.lines.size(), 0u );
  std::size_t next = 0u;
  for ( std::size_t i = 0u; i < netlist.lines.size(); ++i )
  {
    const auto& line = netlist.lines[i];
    if ( line.tag == LineTag::Ancilla )
    {
      s[i] = line.constant;
      continue;
    }
    if ( next >= primary_inputs.size() )
    {
      throw contract_error( "missing value for primary input line " + line.port + std::to_string( line.bit ) );
    }
    s[i] = primary_inputs[next++] & 1u;
  }
  if ( next != primary_inputs.size() )
  {
    throw contract_error( "more input values than primary input lines" );
  }
  return s;
}

State initial_state( const RevNetlist& netlist, const std::map<std::string, std::uint64_t>& words )
{
  State s( netlist.lines.size(), 0u );
  for ( std::size_t i = 0u; i < netlist.lines.size(); ++i )
  {
    const auto& line = netlist.lines[i];
    if ( line.tag == LineTag::Ancilla )
    {
      s[i] = line.constant;
      continue;
    }
    const auto it = words.find( line.port );
    if ( it == words.end() )
    {
      throw contract_error( "missing value for primary input port " + line.port );
    }
    s[i] = ( it->second >> line.bit ) & 1u;
  }
  return s;
}

void run_forward( const RevNetlist& netlist, State& state )
{
  if ( state.size() != netlist.lines.size() )
  {
    throw contract_error( "state size does not match line count" );
  }
  for ( const auto& g : netlist.gates )
  {
    std::uint32_t pattern = 0u;
    for ( std::size_t i = 0u; i < g.lines.size(); ++i )
    {
      pattern |= std::uint32_t{ state[g.lines[i]] } << i;
    }
    const auto out = g.gate->apply( pattern );
    for ( std::size_t i = 0u; i < g.lines.size(); ++i )
    {
      state[g.lines[i]] = ( out >> i ) & 1u;
    }
  }
}

void run_backward( const RevNetlist& netlist, State& state )
{
  if ( state.size() != netlist.lines.size() )
  {
    throw contract_error( "state size does not match line count" );
  }
  for ( auto it = netlist.gates.rbegin(); it != netlist.gates.rend(); ++it )
  {
    std::uint32_t pattern = 0u;
    for ( std::size_t i = 0u; i < it->lines.size(); ++i )
    {
      pattern |= std::uint32_t{ state[it->lines[i]] } << i;
    }
    const auto in = it->gate->invert( pattern );
    for ( std::size_t i = 0u; i < it->lines.size(); ++i )
    {
      state[it->lines[i]] = ( in >> i ) & 1u;
    }
  }
}

State simulate( const RevNetlist& netlist, std::span<const std::uint8_t> primary_inputs )
{
  auto s = initial_state( netlist, primary_inputs );
  run_forward( netlist, s );
  return s;
}

State simulate( const RevNetlist& netlist, const std::map<std::string, std::uint64_t>& words )
{
  auto s = initial_state( netlist, words );
  run_forward( netlist, s );
  return s;
}

State simulate_inverse( const RevNetlist& netlist, State final_state )
{
  run_backward( netlist, final_state );
  return final_state;
}

std::map<std::string, std::uint64_t> read_outputs( const RevNetlist& netlist, const State& final_state )
{
  std::map<std::string, std::uint64_t> words;
  for ( std::size_t i = 0u; i < netlist.output_roles.size(); ++i )
  {
    const auto& role = netlist.output_roles[i];
    if ( role.kind == RoleKind::PrimaryOutput )
    {
      words[role.port] |= std::uint64_t{ final_state[i] } << role.bit;
    }
  }
  return words;
}

Metrics metrics_of( const RevNetlist& netlist )
{
  Metrics m;
  m.gate_count = netlist.gates.size();
  m.ancilla_count = static_cast<std::size_t>(
      std::count_if( netlist.lines.begin(), netlist.lines.end(), []( const auto& l ) { return l.tag == LineTag::Ancilla; } ) );
  m.garbage_count = static_cast<std::size_t>( std::count_if( netlist.output_roles.begin(), netlist.output_roles.end(),
                                                             []( const auto& r ) { return r.kind == RoleKind::Garbage; } ) );

  std::vector<std::size_t> depth( netlist.lines.size(), 0u );
  for ( const auto& g : netlist.gates )
  {
    std::size_t d = 0u;
    for ( auto l : g.lines )
    {
      d = std::max( d, depth[l] );
    }
    for ( auto l : g.lines )
    {
      depth[l] = d + 1u;
    }
  }
  for ( std::size_t i = 0u; i < netlist.output_roles.size(); ++i )
  {
    if ( netlist.output_roles[i].kind == RoleKind::PrimaryOutput )
    {
      m.unit_delay = std::max( m.unit_delay, depth[i] );
    }
  }
  return m;
}

bool restored_constants_hold( const RevNetlist& netlist, unsigned exhaustive_limit, std::size_t samples,
                              std::uint64_t seed )
{
  std::vector<std::size_t> restored;
  for ( std::size_t i = 0u; i < netlist.lines.size(); ++i )
  {
    if ( netlist.output_roles[i].kind == RoleKind::RestoredConstant )
    {
      restored.push_back( i );
    }
  }
  if ( restored.empty() )
  {
    return true;
  }

  const auto inputs = static_cast<std::size_t>( std::count_if(
      netlist.lines.begin(), netlist.lines.end(), []( const auto& l ) { return l.tag == LineTag::PrimaryInput; } ) );

  auto holds = [&]( const std::vector<std::uint8_t>& in ) {
    const auto s = simulate( netlist, in );
    return std::all_of( restored.begin(), restored.end(),
                        [&]( std::size_t l ) { return s[l] == static_cast<std::uint8_t>( netlist.lines[l].constant ); } );
  };

  std::vector<std::uint8_t> in( inputs, 0u );
  if ( inputs <= exhaustive_limit )
  {
    for ( std::uint64_t x = 0u; x < ( std::uint64_t{ 1 } << inputs ); ++x )
    {
      for ( std::size_t i = 0u; i < inputs; ++i )
      {
        in[i] = ( x >> i ) & 1u;
      }
      if ( !holds( in ) )
      {
        return false;
      }
    }
    return true;
  }

  std::mt19937_64 rng( seed );
  for ( std::size_t s = 0u; s < samples; ++s )
  {
    for ( auto& v : in )
    {
      v = rng() & 1u;
    }
    if ( !holds( in ) )
    {
      return false;
    }
  }
  return true;
}

RevNetlist build_full_adder( FullAdderVariant variant )
{
  RevNetlist n;
  auto out = [&]( std::size_t line, const char* port ) { n.output_roles[line] = { RoleKind::PrimaryOutput, port, 0u }; };

  switch ( variant )
  {
  case FullAdderVariant::Tsg:
  {
    const auto a = n.add_input( "a", 0u ), b = n.add_input( "b", 0u );
    const auto zero = n.add_ancilla( false );
    const auto cin = n.add_input( "cin", 0u );
    n.apply( "TSG", { a, b, zero, cin } );
    out( zero, "sum" );
    out( cin, "carry" );
    break;
  }
  case FullAdderVariant::NgNgFeynman:
  {
    const auto a = n.add_input( "a", 0u ), b = n.add_input( "b", 0u ), cin = n.add_input( "cin", 0u );
    const auto z1 = n.add_ancilla( false ), z2 = n.add_ancilla( false );
    n.apply( "NG", { a, b, z1 } );    // b <- ab, z1 <- a^b
    n.apply( "NG", { z1, cin, z2 } ); // cin <- (a^b)cin, z2 <- sum
    n.apply( "FEYNMAN", { cin, b } ); // b <- carry
    out( z2, "sum" );
    out( b, "carry" );
    break;
  }
  case FullAdderVariant::NgToffoliFeynman:
  {
    const auto a = n.add_input( "a", 0u ), b = n.add_input( "b", 0u ), cin = n.add_input( "cin", 0u );
    const auto z = n.add_ancilla( false );
    n.apply( "NG", { a, b, z } );        // b <- ab, z <- a^b
    n.apply( "TOFFOLI", { z, cin, b } ); // b <- carry
    n.apply( "FEYNMAN", { z, cin } );    // cin <- sum
    out( cin, "sum" );
    out( b, "carry" );
    break;
  }
  case FullAdderVariant::Fredkin5:
  {
    const auto a = n.add_input( "a", 0u ), b = n.add_input( "b", 0u ), cin = n.add_input( "cin", 0u );
    const auto x = n.add_ancilla( false ), xn = n.add_ancilla( true );
    const auto y = n.add_ancilla( false ), yn = n.add_ancilla( true );
    n.apply( "FREDKIN", { b, x, xn } );   // x <- b, xn <- b'
    n.apply( "FREDKIN", { a, x, xn } );   // x <- a^b, xn <- xnor
    n.apply( "FREDKIN", { x, y, yn } );   // y <- a^b, yn <- its complement
    n.apply( "FREDKIN", { cin, x, xn } ); // x <- sum
    n.apply( "FREDKIN", { y, a, cin } );  // a <- (a^b) ? cin : a = carry
    out( x, "sum" );
    out( a, "carry" );
    break;
  }
  }
  validate( n );
  return n;
}

RevNetlist expand( const CellNetlist& netlist )
{
  validate( netlist );
  RevNetlist r;

  std::vector<std::size_t> consumers( netlist.net_count, 0u );
  for ( const auto& c : netlist.cells )
  {
    for ( auto n : c.ins )
    {
      ++consumers[n];
    }
  }
  for ( const auto& p : netlist.outputs )
  {
    for ( auto n : p.nets )
    {
      ++consumers[n];
    }
  }

  const auto feynman = gate_by_name( "FEYNMAN" );
  const auto toffoli = gate_by_name( "TOFFOLI" );
  const auto fredkin = gate_by_name( "FREDKIN" );
  const auto ng = gate_by_name( "NG" );
  const auto tsg = gate_by_name( "TSG" );

  // lines currently holding the value of each net, one per pending consumer
  std::vector<std::vector<std::size_t>> holders( netlist.net_count );
  auto produce = [&]( NetId net, std::size_t line ) {
    holders[net].push_back( line );
    for ( std::size_t k = 1u; k < consumers[net]; ++k )
    {
      const auto copy = r.add_ancilla( false );
      r.apply( feynman, { line, copy } );
      holders[net].push_back( copy );
    }
  };
  auto take = [&]( NetId net ) {
    if ( holders[net].empty() )
    {
      throw contract_error( "expand: net n" + std::to_string( net ) + " consumed more often than counted" );
    }
    const auto line = holders[net].back();
    holders[net].pop_back();
    return line;
  };

  for ( const auto& p : netlist.inputs )
  {
    for ( std::size_t i = 0u; i < p.nets.size(); ++i )
    {
      produce( p.nets[i], r.add_input( p.name, static_cast<unsigned>( i ) ) );
    }
  }

  for ( const auto& c : netlist.cells )
  {
    std::vector<std::size_t> in;
    for ( auto n : c.ins )
    {
      in.push_back( take( n ) );
    }
    switch ( c.kind )
    {
    case CellKind::And:
    {
      const auto t = r.add_ancilla( false );
      r.apply( toffoli, { in[0], in[1], t } );
      produce( c.outs[0], t );
      break;
    }
    case CellKind::HalfAdder:
    {
      const auto z = r.add_ancilla( false );
      r.apply( ng, { in[0], in[1], z } );
      produce( c.outs[0], z );
      produce( c.outs[1], in[1] );
      break;
    }
    case CellKind::FullAdder:
    {
      const auto z = r.add_ancilla( false );
      r.apply( tsg, { in[0], in[1], z, in[2] } );
      produce( c.outs[0], z );
      produce( c.outs[1], in[2] );
      break;
    }
    case CellKind::Or:
    {
      const auto t = r.add_ancilla( false );
      r.apply( toffoli, { in[0], in[1], t } );
      r.apply( feynman, { in[0], t } );
      r.apply( feynman, { in[1], t } );
      produce( c.outs[0], t );
      break;
    }
    case CellKind::Mux:
      r.apply( fredkin, { in[0], in[1], in[2] } );
      produce( c.outs[0], in[1] );
      break;
    }
  }

  for ( const auto& p : netlist.outputs )
  {
    for ( std::size_t i = 0u; i < p.nets.size(); ++i )
    {
      r.output_roles[take( p.nets[i] )] = { RoleKind::PrimaryOutput, p.name, static_cast<unsigned>( i ) };
    }
  }
  return r;
}

} // namespace cifm::rev
