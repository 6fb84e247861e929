#include "cifm/netlist.hpp"

#include "cifm/bitcore.hpp"

#include <algorithm>
#include <utility>

namespace cifm {

std::string_view to_string( CellKind kind )
{
  switch ( kind )
  {
  case CellKind::And:
    return "AND";
  case CellKind::HalfAdder:
    return "HA";
  case CellKind::FullAdder:
    return "FA";
  case CellKind::Or:
    return "OR";
  case CellKind::Mux:
    return "MUX";
  }
  return "?";
}

std::optional<CellKind> cell_kind_from_string( std::string_view name )
{
  for ( auto k : { CellKind::And, CellKind::HalfAdder, CellKind::FullAdder, CellKind::Or, CellKind::Mux } )
  {
    if ( to_string( k ) == name )
    {
      return k;
    }
  }
  return std::nullopt;
}

std::size_t input_arity( CellKind kind )
{
  return ( kind == CellKind::FullAdder || kind == CellKind::Mux ) ? 3u : 2u;
}

std::size_t output_arity( CellKind kind )
{
  return ( kind == CellKind::HalfAdder || kind == CellKind::FullAdder ) ? 2u : 1u;
}

const Port& CellNetlist::input( std::string_view name ) const
{
  for ( const auto& p : inputs )
  {
    if ( p.name == name )
    {
      return p;
    }
  }
  throw contract_error( "no input port named " + std::string( name ) );
}

const Port& CellNetlist::output( std::string_view name ) const
{
  for ( const auto& p : outputs )
  {
    if ( p.name == name )
    {
      return p;
    }
  }
  throw contract_error( "no output port named " + std::string( name ) );
}

void validate( const CellNetlist& netlist )
{
  std::vector<std::uint8_t> defined( netlist.net_count, 0u );
  auto check_range = [&]( NetId n ) {
    if ( n >= netlist.net_count )
    {
      throw contract_error( "net n" + std::to_string( n ) + " out of range" );
    }
  };
  auto drive = [&]( NetId n ) {
    check_range( n );
    if ( defined[n] )
    {
      throw contract_error( "net n" + std::to_string( n ) + " has more than one driver" );
    }
    defined[n] = 1u;
  };

  for ( const auto& p : netlist.inputs )
  {
    for ( auto n : p.nets )
    {
      drive( n );
    }
  }
  for ( const auto& c : netlist.cells )
  {
    if ( c.ins.size() != input_arity( c.kind ) || c.outs.size() != output_arity( c.kind ) )
    {
      throw contract_error( "cell arity does not match kind " + std::string( to_string( c.kind ) ) );
    }
    for ( auto n : c.ins )
    {
      check_range( n );
      if ( !defined[n] )
      {
        throw contract_error( "net n" + std::to_string( n ) + " used before definition" );
      }
    }
    for ( auto n : c.outs )
    {
      drive( n );
    }
  }
  for ( const auto& p : netlist.outputs )
  {
    for ( auto n : p.nets )
    {
      check_range( n );
      if ( !defined[n] )
      {
        throw contract_error( "output net n" + std::to_string( n ) + " is undriven" );
      }
    }
  }
}

std::vector<NetId> NetlistBuilder::add_input( std::string name, unsigned width )
{
  Port port{ std::move( name ), {} };
  for ( unsigned i = 0u; i < width; ++i )
  {
    port.nets.push_back( fresh() );
  }
  netlist_.inputs.push_back( port );
  return port.nets;
}

std::vector<NetId> NetlistBuilder::add_cell( CellKind kind, std::vector<NetId> ins, int lvl,
                                             const std::string& module_id )
{
  Cell cell{ kind, std::move( ins ), {}, lvl, module_id };
  for ( std::size_t i = 0u; i < output_arity( kind ); ++i )
  {
    cell.outs.push_back( fresh() );
  }
  auto outs = cell.outs;
  netlist_.cells.push_back( std::move( cell ) );
  return outs;
}

void NetlistBuilder::add_output( std::string name, std::vector<NetId> nets )
{
  netlist_.outputs.push_back( { std::move( name ), std::move( nets ) } );
}

void NetlistBuilder::tag_block( const std::string& module_id, std::vector<NetId> nets )
{
  netlist_.block_outputs[module_id] = std::move( nets );
}

NetId NetlistBuilder::and2( NetId a, NetId b, int lvl, const std::string& module_id )
{
  return add_cell( CellKind::And, { a, b }, lvl, module_id ).front();
}

NetId NetlistBuilder::or2( NetId a, NetId b, int lvl, const std::string& module_id )
{
  return add_cell( CellKind::Or, { a, b }, lvl, module_id ).front();
}

NetId NetlistBuilder::mux2( NetId sel, NetId d0, NetId d1, int lvl, const std::string& module_id )
{
  return add_cell( CellKind::Mux, { sel, d0, d1 }, lvl, module_id ).front();
}

NetId NetlistBuilder::or_reduce( std::span<const NetId> nets, int lvl, const std::string& module_id )
{
  if ( nets.empty() )
  {
    throw contract_error( "or_reduce of nothing" );
  }
  std::vector<NetId> layer( nets.begin(), nets.end() );
  while ( layer.size() > 1u )
  {
    std::vector<NetId> next;
    for ( std::size_t i = 0u; i + 1u < layer.size(); i += 2u )
    {
      next.push_back( or2( layer[i], layer[i + 1u], lvl, module_id ) );
    }
    if ( layer.size() % 2u == 1u )
    {
      next.push_back( layer.back() );
    }
    layer = std::move( next );
  }
  return layer.front();
}

std::vector<std::optional<NetId>> NetlistBuilder::ripple_add( std::span<const std::optional<NetId>> x,
                                                              std::span<const std::optional<NetId>> y,
                                                              int lvl, const std::string& module_id )
{
  const auto width = std::max( x.size(), y.size() );
  std::vector<std::optional<NetId>> out;
  out.reserve( width + 1u );
  std::optional<NetId> carry;
  for ( std::size_t i = 0u; i < width; ++i )
  {
    std::vector<NetId> live;
    if ( i < x.size() && x[i] )
    {
      live.push_back( *x[i] );
    }
    if ( i < y.size() && y[i] )
    {
      live.push_back( *y[i] );
    }
    if ( carry )
    {
      live.push_back( *carry );
    }

    switch ( live.size() )
    {
    case 0u:
      out.emplace_back();
      carry.reset();
      break;
    case 1u:
      out.emplace_back( live.front() );
      carry.reset();
      break;
    case 2u:
    {
      const auto sc = add_cell( CellKind::HalfAdder, live, lvl, module_id );
      out.emplace_back( sc[0] );
      carry = sc[1];
      break;
    }
    default:
    {
      const auto sc = add_cell( CellKind::FullAdder, live, lvl, module_id );
      out.emplace_back( sc[0] );
      carry = sc[1];
      break;
    }
    }
  }
  out.push_back( carry );
  return out;
}

CellNetlist NetlistBuilder::finish() &&
{
  validate( netlist_ );
  return std::move( netlist_ );
}

NetValues evaluate( const CellNetlist& netlist, std::span<const std::uint64_t> input_words,
                    const NetOverrides& overrides )
{
  if ( input_words.size() != netlist.inputs.size() )
  {
    throw contract_error( "evaluate: expected " + std::to_string( netlist.inputs.size() ) + " input words" );
  }

  NetValues v( netlist.net_count, 0u );
  auto set = [&]( NetId n, bool value ) {
    const auto it = overrides.find( n );
    v[n] = it != overrides.end() ? ( it->second & 1u ) : static_cast<std::uint8_t>( value );
  };

  for ( std::size_t p = 0u; p < netlist.inputs.size(); ++p )
  {
    const auto& nets = netlist.inputs[p].nets;
    if ( nets.size() < 64u && ( input_words[p] >> nets.size() ) != 0u )
    {
      throw contract_error( "evaluate: input " + netlist.inputs[p].name + " does not fit its width" );
    }
    for ( std::size_t i = 0u; i < nets.size(); ++i )
    {
      set( nets[i], ( input_words[p] >> i ) & 1u );
    }
  }

  for ( const auto& c : netlist.cells )
  {
    const auto& in = c.ins;
    switch ( c.kind )
    {
    case CellKind::And:
      set( c.outs[0], v[in[0]] & v[in[1]] );
      break;
    case CellKind::Or:
      set( c.outs[0], v[in[0]] | v[in[1]] );
      break;
    case CellKind::Mux:
      set( c.outs[0], v[in[0]] ? v[in[2]] : v[in[1]] );
      break;
    case CellKind::HalfAdder:
    {
      const auto r = half_add( v[in[0]], v[in[1]] );
      set( c.outs[0], r.sum );
      set( c.outs[1], r.carry );
      break;
    }
    case CellKind::FullAdder:
    {
      const auto r = full_add( v[in[0]], v[in[1]], v[in[2]] );
      set( c.outs[0], r.sum );
      set( c.outs[1], r.carry );
      break;
    }
    }
  }
  return v;
}

std::uint64_t read_port( const Port& port, const NetValues& values )
{
  std::uint64_t word = 0u;
  for ( std::size_t i = 0u; i < port.nets.size(); ++i )
  {
    word |= std::uint64_t{ values[port.nets[i]] } << i;
  }
  return word;
}

std::vector<std::uint64_t> evaluate_words( const CellNetlist& netlist, std::span<const std::uint64_t> input_words,
                                           const NetOverrides& overrides )
{
  const auto v = evaluate( netlist, input_words, overrides );
  std::vector<std::uint64_t> words;
  words.reserve( netlist.outputs.size() );
  for ( const auto& p : netlist.outputs )
  {
    words.push_back( read_port( p, v ) );
  }
  return words;
}

CellCensus census( const CellNetlist& netlist )
{
  CellCensus result;
  std::vector<std::size_t> depth( netlist.net_count, 0u );
  for ( const auto& c : netlist.cells )
  {
    ++result.total;
    ++result.by_kind[c.kind];
    std::size_t d = 0u;
    for ( auto n : c.ins )
    {
      d = std::max( d, depth[n] );
    }
    for ( auto n : c.outs )
    {
      depth[n] = d + 1u;
    }
  }
  for ( const auto& p : netlist.outputs )
  {
    for ( auto n : p.nets )
    {
      result.logic_depth = std::max( result.logic_depth, depth[n] );
    }
  }
  return result;
}

} // namespace cifm
