#include "cifm/json_io.hpp"

#include <algorithm>
#include <cctype>

namespace cifm {

namespace {

std::string net_name( NetId n ) { return "n" + std::to_string( n ); }

NetId parse_net( const json& j )
{
  const auto s = j.get<std::string>();
  if ( s.size() < 2u || s[0] != 'n' ||
       !std::all_of( s.begin() + 1, s.end(), []( unsigned char c ) { return std::isdigit( c ); } ) )
  {
    throw contract_error( "malformed net name '" + s + "'" );
  }
  return static_cast<NetId>( std::stoul( s.substr( 1u ) ) );
}

json net_list( const std::vector<NetId>& nets )
{
  auto arr = json::array();
  for ( auto n : nets )
  {
    arr.push_back( net_name( n ) );
  }
  return arr;
}

std::vector<NetId> parse_net_list( const json& j )
{
  std::vector<NetId> nets;
  for ( const auto& e : j )
  {
    nets.push_back( parse_net( e ) );
  }
  return nets;
}

/// "p17" -> ("p", 17)
std::pair<std::string, unsigned> split_bit_name( const std::string& s )
{
  auto pos = s.size();
  while ( pos > 0u && std::isdigit( static_cast<unsigned char>( s[pos - 1u] ) ) )
  {
    --pos;
  }
  if ( pos == 0u || pos == s.size() )
  {
    throw contract_error( "output name '" + s + "' is not <port><bit>" );
  }
  return { s.substr( 0u, pos ), static_cast<unsigned>( std::stoul( s.substr( pos ) ) ) };
}

json id_list( const std::set<ModuleId>& ids )
{
  auto arr = json::array();
  for ( const auto& id : ids )
  {
    arr.push_back( to_json( id ) );
  }
  return arr;
}

} // namespace

json to_json( const CellNetlist& netlist )
{
  json j;
  auto& inputs = j["inputs"] = json::array();
  for ( const auto& p : netlist.inputs )
  {
    inputs.push_back( { { "name", p.name }, { "width", p.nets.size() }, { "nets", net_list( p.nets ) } } );
  }
  auto& cells = j["cells"] = json::array();
  for ( const auto& c : netlist.cells )
  {
    cells.push_back( { { "kind", to_string( c.kind ) },
                       { "ins", net_list( c.ins ) },
                       { "outs", net_list( c.outs ) },
                       { "level", c.level },
                       { "module_id", c.module_id } } );
  }
  auto& outputs = j["outputs"] = json::array();
  for ( const auto& p : netlist.outputs )
  {
    for ( std::size_t i = 0u; i < p.nets.size(); ++i )
    {
      outputs.push_back( { { "name", p.name + std::to_string( i ) }, { "net", net_name( p.nets[i] ) } } );
    }
  }
  return j;
}

CellNetlist cell_netlist_from_json( const json& j )
{
  CellNetlist n;
  NetId max_net = 0u;
  bool any = false;
  auto see = [&]( const std::vector<NetId>& nets ) {
    for ( auto x : nets )
    {
      max_net = std::max( max_net, x );
      any = true;
    }
  };

  for ( const auto& p : j.at( "inputs" ) )
  {
    Port port{ p.at( "name" ).get<std::string>(), parse_net_list( p.at( "nets" ) ) };
    if ( port.nets.size() != p.at( "width" ).get<std::size_t>() )
    {
      throw contract_error( "input " + port.name + ": width does not match its net list" );
    }
    see( port.nets );
    n.inputs.push_back( std::move( port ) );
  }
  for ( const auto& c : j.at( "cells" ) )
  {
    const auto kind = cell_kind_from_string( c.at( "kind" ).get<std::string>() );
    if ( !kind )
    {
      throw contract_error( "unknown cell kind " + c.at( "kind" ).dump() );
    }
    Cell cell{ *kind, parse_net_list( c.at( "ins" ) ), parse_net_list( c.at( "outs" ) ), c.at( "level" ).get<int>(),
               c.value( "module_id", std::string{} ) };
    see( cell.ins );
    see( cell.outs );
    n.cells.push_back( std::move( cell ) );
  }

  std::map<std::string, std::map<unsigned, NetId>> bits;
  std::vector<std::string> order;
  for ( const auto& o : j.at( "outputs" ) )
  {
    const auto [port, bit] = split_bit_name( o.at( "name" ).get<std::string>() );
    const auto net = parse_net( o.at( "net" ) );
    see( { net } );
    if ( !bits.contains( port ) )
    {
      order.push_back( port );
    }
    if ( !bits[port].emplace( bit, net ).second )
    {
      throw contract_error( "duplicate output bit " + port + std::to_string( bit ) );
    }
  }
  for ( const auto& name : order )
  {
    Port port{ name, {} };
    unsigned expect = 0u;
    for ( const auto& [bit, net] : bits[name] )
    {
      if ( bit != expect++ )
      {
        throw contract_error( "output port " + name + " has a gap in its bits" );
      }
      port.nets.push_back( net );
    }
    n.outputs.push_back( std::move( port ) );
  }

  n.net_count = any ? max_net + 1u : 0u;
  validate( n );
  return n;
}

json to_json( const ModuleId& id )
{
  return { { "quadrant", to_string( id.quadrant ) }, { "row", id.row }, { "col", id.col }, { "redundant", id.redundant } };
}

json to_json( const ActivityReport& report )
{
  json levels = json::object();
  for ( const auto& [id, n] : report.adder_levels_active )
  {
    levels[id.to_string()] = n;
  }
  return { { "active", id_list( report.active_mul4 ) },
           { "gated", id_list( report.gated_mul4 ) },
           { "disabled_faulty", id_list( report.disabled_faulty ) },
           { "adder_levels_active", levels },
           { "power_proxy", report.power_proxy } };
}

json to_json( const fp::FpMulTrace& t )
{
  return { { "significand_a", t.significand_a.to_hex() },
           { "significand_b", t.significand_b.to_hex() },
           { "raw_product", t.raw_product.to_hex() },
           { "normalized", t.normalized },
           { "exponent_pre_bias", t.exponent_pre_bias },
           { "exponent_final", t.exponent_final },
           { "rounding_applied", t.rounding_applied == fp::RoundingApplied::Increment ? "INCREMENT" : "NONE" },
           { "special", t.special },
           { "flushed_input", t.flushed_input },
           { "overflow", t.overflow },
           { "underflow", t.underflow },
           { "activity", to_json( t.activity ) } };
}

namespace rev {

json to_json( const RevNetlist& netlist )
{
  json j;
  auto& lines = j["lines"] = json::array();
  for ( const auto& l : netlist.lines )
  {
    if ( l.tag == LineTag::PrimaryInput )
    {
      lines.push_back( { { "tag", "PRIMARY_INPUT" }, { "port", l.port }, { "bit", l.bit } } );
    }
    else
    {
      lines.push_back( { { "tag", "ANCILLA" }, { "constant", l.constant ? 1 : 0 } } );
    }
  }
  auto& gates = j["gates"] = json::array();
  for ( std::size_t i = 0u; i < netlist.gates.size(); ++i )
  {
    gates.push_back( { { "ordinal", i }, { "name", netlist.gates[i].gate->name() }, { "lines", netlist.gates[i].lines } } );
  }
  auto& roles = j["output_roles"] = json::array();
  for ( const auto& r : netlist.output_roles )
  {
    switch ( r.kind )
    {
    case RoleKind::PrimaryOutput:
      roles.push_back( { { "role", "PRIMARY_OUTPUT" }, { "port", r.port }, { "bit", r.bit } } );
      break;
    case RoleKind::Garbage:
      roles.push_back( { { "role", "GARBAGE" } } );
      break;
    case RoleKind::RestoredConstant:
      roles.push_back( { { "role", "RESTORED_CONSTANT" } } );
      break;
    }
  }
  return j;
}

RevNetlist rev_netlist_from_json( const json& j )
{
  RevNetlist n;
  for ( const auto& l : j.at( "lines" ) )
  {
    const auto tag = l.at( "tag" ).get<std::string>();
    if ( tag == "PRIMARY_INPUT" )
    {
      n.add_input( l.at( "port" ).get<std::string>(), l.at( "bit" ).get<unsigned>() );
    }
    else if ( tag == "ANCILLA" )
    {
      n.add_ancilla( l.at( "constant" ).get<int>() != 0 );
    }
    else
    {
      throw contract_error( "unknown line tag " + tag );
    }
  }

  const auto& gates = j.at( "gates" );
  std::vector<const json*> ordered( gates.size(), nullptr );
  for ( const auto& g : gates )
  {
    const auto ord = g.at( "ordinal" ).get<std::size_t>();
    if ( ord >= ordered.size() || ordered[ord] )
    {
      throw contract_error( "gate ordinals must be a permutation of 0..N-1" );
    }
    ordered[ord] = &g;
  }
  for ( const auto* g : ordered )
  {
    n.apply( g->at( "name" ).get<std::string>(), g->at( "lines" ).get<std::vector<std::size_t>>() );
  }

  const auto& roles = j.at( "output_roles" );
  if ( roles.size() != n.lines.size() )
  {
    throw contract_error( "output_roles must list one role per line" );
  }
  for ( std::size_t i = 0u; i < roles.size(); ++i )
  {
    const auto role = roles[i].at( "role" ).get<std::string>();
    if ( role == "PRIMARY_OUTPUT" )
    {
      n.output_roles[i] = { RoleKind::PrimaryOutput, roles[i].at( "port" ).get<std::string>(),
                            roles[i].at( "bit" ).get<unsigned>() };
    }
    else if ( role == "GARBAGE" )
    {
      n.output_roles[i] = { RoleKind::Garbage, {}, 0u };
    }
    else if ( role == "RESTORED_CONSTANT" )
    {
      n.output_roles[i] = { RoleKind::RestoredConstant, {}, 0u };
    }
    else
    {
      throw contract_error( "unknown output role " + role );
    }
  }
  validate( n );
  return n;
}

json to_json( const Metrics& m )
{
  return { { "No of Gates", m.gate_count },
           { "No of Garbage Outputs", m.garbage_count },
           { "No of Ancilla Inputs", m.ancilla_count },
           { "Unit Delay", m.unit_delay } };
}

} // namespace rev

} // namespace cifm
