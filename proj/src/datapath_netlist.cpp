#include "cifm/multiplier.hpp"

#include <utility>

namespace cifm {

namespace {

using SparseBus = std::vector<std::optional<NetId>>;

SparseBus shifted( std::span<const NetId> nets, unsigned offset )
{
  SparseBus bus( offset );
  bus.insert( bus.end(), nets.begin(), nets.end() );
  return bus;
}

SparseBus shifted( const SparseBus& nets, unsigned offset )
{
  SparseBus bus( offset );
  bus.insert( bus.end(), nets.begin(), nets.end() );
  return bus;
}

SparseBus truncated( SparseBus bus, std::size_t width )
{
  bus.resize( width );
  return bus;
}

std::vector<NetId> dense( const SparseBus& bus )
{
  std::vector<NetId> nets;
  for ( const auto& n : bus )
  {
    if ( !n )
    {
      throw contract_error( "datapath output bit has no driver" );
    }
    nets.push_back( *n );
  }
  return nets;
}

std::vector<NetId> group( std::span<const NetId> bus, int index )
{
  return { bus.begin() + 4 * index, bus.begin() + 4 * index + 4 };
}

/*
 * Three-level 4x4 block. Partial products pp_i = a & b_i (weight i). Level 1
 * forms S01 = pp0 + pp1 and S23 = pp2 + pp3 with two 2-bit blocks each.
 * Level 2 adds S01 + (S23 << 2) as independent low (weights 2-3) and high
 * (weights 4-5) blocks. Level 3 folds the low block's carry into the high
 * half and resolves weights 6-7.
 */
std::vector<NetId> build_mul4( NetlistBuilder& nb, std::span<const NetId> a, std::span<const NetId> b,
                               const std::string& id )
{
  std::array<std::array<NetId, 4>, 4> pp{};
  for ( int i = 0; i < 4; ++i )
  {
    for ( int k = 0; k < 4; ++k )
    {
      pp[i][k] = nb.and2( a[k], b[i], level::partial_product, id );
    }
  }

  auto ha = [&]( NetId x, NetId y, int lvl ) { return nb.add_cell( CellKind::HalfAdder, { x, y }, lvl, id ); };
  auto fa = [&]( NetId x, NetId y, NetId z, int lvl ) {
    return nb.add_cell( CellKind::FullAdder, { x, y, z }, lvl, id );
  };

  // level 1: s[0] = pp_lo + (pp_hi << 1), bits at relative weights 1..5
  auto pair_sum = [&]( const std::array<NetId, 4>& lo, const std::array<NetId, 4>& hi ) {
    std::array<NetId, 6> s{};
    s[0] = lo[0];
    const auto b1 = ha( lo[1], hi[0], level::first );
    const auto b2 = fa( lo[2], hi[1], b1[1], level::first );
    const auto b3 = fa( lo[3], hi[2], b2[1], level::first );
    const auto b4 = ha( hi[3], b3[1], level::first );
    s[1] = b1[0];
    s[2] = b2[0];
    s[3] = b3[0];
    s[4] = b4[0];
    s[5] = b4[1];
    return s;
  };
  const auto s01 = pair_sum( pp[0], pp[1] );
  const auto s23 = pair_sum( pp[2], pp[3] ); // weight w here is w + 2 overall

  // level 2
  const auto l5a = ha( s01[2], s23[0], level::second );
  const auto l5b = fa( s01[3], s23[1], l5a[1], level::second );
  const auto l6a = ha( s01[4], s23[2], level::second );
  const auto l6b = fa( s01[5], s23[3], l6a[1], level::second );

  // level 3
  const auto l7a = ha( l6a[0], l5b[1], level::third );
  const auto l7b = ha( l6b[0], l7a[1], level::third );
  const auto l8a = fa( s23[4], l6b[1], l7b[1], level::third );
  const auto l8b = ha( s23[5], l8a[1], level::third );

  std::vector<NetId> p{ s01[0], s01[1], l5a[0], l5b[0], l7a[0], l7b[0], l8a[0], l8b[0] };
  nb.tag_block( id, p );
  return p;
}

/// Sums the nine block products with weights 2^(4(i+j)): rows first, then
/// the three row sums. `products[i][j]` are 8-bit buses.
std::vector<NetId> sum_partials( NetlistBuilder& nb, const std::array<std::array<std::vector<NetId>, 3>, 3>& products,
                                 const std::string& id )
{
  std::array<SparseBus, 3> rows;
  for ( int i = 0; i < 3; ++i )
  {
    auto acc = shifted( products[i][0], 0u );
    acc = nb.ripple_add( acc, shifted( products[i][1], 4u ), level::combine12, id );
    acc = nb.ripple_add( acc, shifted( products[i][2], 8u ), level::combine12, id );
    rows[i] = truncated( std::move( acc ), 16u );
  }
  auto total = nb.ripple_add( rows[0], shifted( rows[1], 4u ), level::combine12, id );
  total = nb.ripple_add( total, shifted( rows[2], 8u ), level::combine12, id );
  return dense( truncated( std::move( total ), 24u ) );
}

std::vector<NetId> build_mul12( NetlistBuilder& nb, std::span<const NetId> a, std::span<const NetId> b, Quadrant q )
{
  std::array<std::array<std::vector<NetId>, 3>, 3> products;
  for ( int i = 0; i < 3; ++i )
  {
    for ( int j = 0; j < 3; ++j )
    {
      products[i][j] = build_mul4( nb, group( a, i ), group( b, j ), ModuleId::block( q, i, j ).to_string() );
    }
  }
  return sum_partials( nb, products, to_string( q ) );
}

struct RepairPorts
{
  NetId enable;
  std::vector<NetId> row_select;
  std::vector<NetId> col_select;
};

RepairPorts add_repair_ports( NetlistBuilder& nb, Quadrant q )
{
  const auto name = to_string( q );
  RepairPorts ports;
  ports.enable = nb.add_input( "e_" + name, 1u ).front();
  ports.row_select = nb.add_input( "rsel_" + name, 3u );
  ports.col_select = nb.add_input( "csel_" + name, 3u );
  return ports;
}

std::vector<NetId> build_mul12_featured( NetlistBuilder& nb, std::span<const NetId> a, std::span<const NetId> b,
                                         Quadrant q, std::optional<NetId> quadrant_enable, const RepairPorts& repair )
{
  const auto qname = to_string( q );
  const auto ctl = qname + ":ctl";

  // checkers: group i is needed when any group >= i is nonzero
  auto group_enables = [&]( std::span<const NetId> bus ) {
    const auto g1 = group( bus, 1 );
    const auto g2 = group( bus, 2 );
    const auto nz2 = nb.or_reduce( g2, level::control, ctl );
    const auto nz1 = nb.or_reduce( g1, level::control, ctl );
    return std::array<std::optional<NetId>, 3>{ std::nullopt, nb.or2( nz1, nz2, level::control, ctl ), nz2 };
  };
  const auto row_en = group_enables( a );
  const auto col_en = group_enables( b );

  // spare operands: one-hot selected groups
  auto select_group = [&]( std::span<const NetId> bus, const std::vector<NetId>& sel ) {
    std::vector<NetId> out;
    for ( int k = 0; k < 4; ++k )
    {
      std::vector<NetId> terms;
      for ( int i = 0; i < 3; ++i )
      {
        terms.push_back( nb.and2( sel[i], bus[4 * i + k], level::control, ctl ) );
      }
      out.push_back( nb.or_reduce( terms, level::control, ctl ) );
    }
    return out;
  };
  const auto spare_a = select_group( a, repair.row_select );
  const auto spare_b = select_group( b, repair.col_select );
  const auto spare = build_mul4( nb, spare_a, spare_b, ModuleId::spare( q ).to_string() );

  std::array<std::array<std::vector<NetId>, 3>, 3> products;
  for ( int i = 0; i < 3; ++i )
  {
    for ( int j = 0; j < 3; ++j )
    {
      const auto raw = build_mul4( nb, group( a, i ), group( b, j ), ModuleId::block( q, i, j ).to_string() );

      std::optional<NetId> enable = quadrant_enable;
      for ( const auto& e : { row_en[i], col_en[j] } )
      {
        if ( e )
        {
          enable = enable ? nb.and2( *enable, *e, level::control, ctl ) : *e;
        }
      }
      const auto here = nb.and2( repair.row_select[i], repair.col_select[j], level::control, ctl );
      const auto take_spare = nb.and2( repair.enable, here, level::control, ctl );

      auto& out = products[i][j];
      for ( int k = 0; k < 8; ++k )
      {
        const auto isolated = enable ? nb.and2( *enable, raw[k], level::control, ctl ) : raw[k];
        out.push_back( nb.mux2( take_spare, isolated, spare[k], level::control, ctl ) );
      }
    }
  }
  return sum_partials( nb, products, qname );
}

struct QuadrantOperands
{
  Quadrant q;
  std::vector<NetId> a;
  std::vector<NetId> b;
};

std::array<QuadrantOperands, 4> split_quadrants( std::span<const NetId> a, std::span<const NetId> b )
{
  const std::vector<NetId> al( a.begin(), a.begin() + 12 ), ah( a.begin() + 12, a.end() );
  const std::vector<NetId> bl( b.begin(), b.begin() + 12 ), bh( b.begin() + 12, b.end() );
  return { { { Quadrant::HH, ah, bh }, { Quadrant::HL, ah, bl }, { Quadrant::LH, al, bh }, { Quadrant::LL, al, bl } } };
}

/// P = HH << 24 + (HL + LH) << 12 + LL
std::vector<NetId> combine_quadrants( NetlistBuilder& nb, const std::array<std::vector<NetId>, 4>& q )
{
  const std::string id = "top";
  const auto hh = shifted( q[0], 0u ), hl = shifted( q[1], 0u ), lh = shifted( q[2], 0u ), ll = shifted( q[3], 0u );
  const auto mid = nb.ripple_add( hl, lh, level::combine24, id );
  auto total = nb.ripple_add( ll, shifted( mid, 12u ), level::combine24, id );
  total = nb.ripple_add( truncated( std::move( total ), 48u ), shifted( hh, 24u ), level::combine24, id );
  return dense( truncated( std::move( total ), 48u ) );
}

} // namespace

CellNetlist export_netlist( NetlistLevel lvl )
{
  NetlistBuilder nb;
  switch ( lvl )
  {
  case NetlistLevel::Mul4:
  {
    const auto a = nb.add_input( "a", 4u );
    const auto b = nb.add_input( "b", 4u );
    nb.add_output( "p", build_mul4( nb, a, b, ModuleId::block( Quadrant::LL, 0, 0 ).to_string() ) );
    break;
  }
  case NetlistLevel::Mul12:
  {
    const auto a = nb.add_input( "a", 12u );
    const auto b = nb.add_input( "b", 12u );
    nb.add_output( "p", build_mul12( nb, a, b, Quadrant::LL ) );
    break;
  }
  case NetlistLevel::Mul24:
  {
    const auto a = nb.add_input( "a", 24u );
    const auto b = nb.add_input( "b", 24u );
    std::array<std::vector<NetId>, 4> products;
    for ( const auto& op : split_quadrants( a, b ) )
    {
      products[static_cast<int>( op.q )] = build_mul12( nb, op.a, op.b, op.q );
    }
    nb.add_output( "p", combine_quadrants( nb, products ) );
    break;
  }
  }
  return std::move( nb ).finish();
}

CellNetlist export_featured_netlist( NetlistLevel lvl )
{
  NetlistBuilder nb;
  switch ( lvl )
  {
  case NetlistLevel::Mul4:
    throw contract_error( "the 4x4 block has no checker or repair logic" );
  case NetlistLevel::Mul12:
  {
    const auto a = nb.add_input( "a", 12u );
    const auto b = nb.add_input( "b", 12u );
    const auto repair = add_repair_ports( nb, Quadrant::LL );
    nb.add_output( "p", build_mul12_featured( nb, a, b, Quadrant::LL, std::nullopt, repair ) );
    break;
  }
  case NetlistLevel::Mul24:
  {
    const auto a = nb.add_input( "a", 24u );
    const auto b = nb.add_input( "b", 24u );
    std::array<RepairPorts, 4> repair;
    for ( auto q : all_quadrants )
    {
      repair[static_cast<int>( q )] = add_repair_ports( nb, q );
    }

    const std::string ctl = "top:ctl";
    const auto ah_nz = nb.or_reduce( std::span( a ).subspan( 12 ), level::control, ctl );
    const auto bh_nz = nb.or_reduce( std::span( b ).subspan( 12 ), level::control, ctl );
    const std::array<std::optional<NetId>, 4> enables{ nb.and2( ah_nz, bh_nz, level::control, ctl ), ah_nz, bh_nz,
                                                       std::nullopt };

    std::array<std::vector<NetId>, 4> products;
    for ( const auto& op : split_quadrants( a, b ) )
    {
      const auto qi = static_cast<int>( op.q );
      products[qi] = build_mul12_featured( nb, op.a, op.b, op.q, enables[qi], repair[qi] );
    }
    nb.add_output( "p", combine_quadrants( nb, products ) );
    break;
  }
  }
  return std::move( nb ).finish();
}

std::vector<std::uint64_t> featured_input_words( NetlistLevel lvl, std::uint64_t a, std::uint64_t b,
                                                 const RepairSet& repair )
{
  std::vector<std::uint64_t> words{ a, b };
  auto push = [&]( Quadrant q ) {
    const auto& r = repair[static_cast<int>( q )];
    if ( r.enabled && r.target )
    {
      words.push_back( 1u );
      words.push_back( std::uint64_t{ 1 } << r.target->row );
      words.push_back( std::uint64_t{ 1 } << r.target->col );
    }
    else
    {
      words.insert( words.end(), { 0u, 0u, 0u } );
    }
  };
  switch ( lvl )
  {
  case NetlistLevel::Mul4:
    throw contract_error( "the 4x4 block has no checker or repair logic" );
  case NetlistLevel::Mul12:
    push( Quadrant::LL );
    break;
  case NetlistLevel::Mul24:
    for ( auto q : all_quadrants )
    {
      push( q );
    }
    break;
  }
  return words;
}

NetOverrides fault_overrides( const CellNetlist& netlist, std::span<const FaultSpec> faults )
{
  NetOverrides overrides;
  for ( const auto& f : faults )
  {
    const auto it = netlist.block_outputs.find( f.target.to_string() );
    if ( it == netlist.block_outputs.end() )
    {
      throw config_error( "netlist has no block " + f.target.to_string() );
    }
    for ( std::size_t k = 0u; k < it->second.size(); ++k )
    {
      overrides[it->second[k]] = ( f.forced_output.value() >> k ) & 1u;
    }
  }
  return overrides;
}

} // namespace cifm
