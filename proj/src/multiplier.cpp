#include "cifm/multiplier.hpp"

#include <algorithm>

namespace cifm {

std::string to_string( Quadrant q )
{
  switch ( q )
  {
  case Quadrant::HH:
    return "HH";
  case Quadrant::HL:
    return "HL";
  case Quadrant::LH:
    return "LH";
  case Quadrant::LL:
    return "LL";
  }
  return "?";
}

std::optional<Quadrant> quadrant_from_string( std::string_view s )
{
  for ( auto q : all_quadrants )
  {
    if ( to_string( q ) == s )
    {
      return q;
    }
  }
  return std::nullopt;
}

std::string ModuleId::to_string() const
{
  const auto q = cifm::to_string( quadrant );
  if ( redundant )
  {
    return q + ":R";
  }
  return q + ":" + std::to_string( row ) + ":" + std::to_string( col );
}

std::vector<ModuleId> quadrant_blocks( Quadrant q )
{
  std::vector<ModuleId> ids;
  for ( int i = 0; i < 3; ++i )
  {
    for ( int j = 0; j < 3; ++j )
    {
      ids.push_back( ModuleId::block( q, i, j ) );
    }
  }
  ids.push_back( ModuleId::spare( q ) );
  return ids;
}

std::vector<ModuleId> all_blocks()
{
  std::vector<ModuleId> ids;
  for ( auto q : all_quadrants )
  {
    const auto qb = quadrant_blocks( q );
    ids.insert( ids.end(), qb.begin(), qb.end() );
  }
  return ids;
}

ActivityReport ActivityReport::idle()
{
  ActivityReport r;
  for ( const auto& id : all_blocks() )
  {
    r.gated_mul4.insert( id );
    r.adder_levels_active[id] = 0;
  }
  return r;
}

namespace {

const CellNetlist& mul4_netlist()
{
  static const CellNetlist netlist = export_netlist( NetlistLevel::Mul4 );
  return netlist;
}

struct BlockEval
{
  std::uint64_t product;
  int levels;
  NetValues values;
};

BlockEval eval_block( std::uint64_t a, std::uint64_t b )
{
  const auto& nl = mul4_netlist();
  const std::uint64_t in[2] = { a, b };
  auto values = evaluate( nl, in );
  const auto product = read_port( nl.outputs.front(), values );
  const auto levels = adder_levels_active( values );
  return { product, levels, std::move( values ) };
}

void require_width( const BitVec& x, unsigned width, const char* what )
{
  if ( x.width() != width )
  {
    throw contract_error( std::string( what ) + ": operands must be " + std::to_string( width ) + "-bit" );
  }
}

void validate_repair( const RepairConfig& repair, Quadrant q )
{
  if ( !repair.enabled )
  {
    if ( repair.target )
    {
      throw config_error( "repair target " + repair.target->to_string() + " set while repair is disabled" );
    }
    return;
  }
  if ( !repair.target )
  {
    throw config_error( "repair enabled without a target block" );
  }
  if ( repair.target->redundant || repair.target->quadrant != q )
  {
    throw config_error( "repair target " + repair.target->to_string() + " is not a block of quadrant " +
                        to_string( q ) );
  }
}

void validate_faults( std::span<const FaultSpec> faults )
{
  std::set<ModuleId> seen;
  for ( const auto& f : faults )
  {
    const auto& t = f.target;
    if ( t.redundant )
    {
      throw config_error( "the redundant block is assumed healthy; cannot fault " + t.to_string() );
    }
    if ( t.row < 0 || t.row > 2 || t.col < 0 || t.col > 2 )
    {
      throw config_error( "fault target row/col must be in 0..2" );
    }
    if ( f.forced_output.width() != 8u )
    {
      throw config_error( "forced fault output must be 8 bits" );
    }
    if ( !seen.insert( t ).second )
    {
      throw config_error( "duplicate fault on " + t.to_string() );
    }
  }
}

/// One 12x12 module. `quadrant_gated` comes from the 24x24 checkers.
std::uint64_t run_quadrant( Quadrant q, std::uint64_t a, std::uint64_t b, std::span<const FaultSpec> faults,
                            const RepairConfig& repair, bool quadrant_gated, const MulOptions& options,
                            MulResult& result )
{
  auto& act = result.activity;

  unsigned rows = 3u, cols = 3u;
  if ( quadrant_gated )
  {
    rows = cols = 0u;
  }
  else if ( options.gating )
  {
    rows = classify_width( BitVec( 12u, a ), { 4u, 8u, 12u } ) / 4u;
    cols = classify_width( BitVec( 12u, b ), { 4u, 8u, 12u } ) / 4u;
  }

  auto fault_on = [&]( const ModuleId& id ) -> const FaultSpec* {
    const auto it = std::find_if( faults.begin(), faults.end(), [&]( const auto& f ) { return f.target == id; } );
    return it == faults.end() ? nullptr : &*it;
  };

  auto record = [&]( const ModuleId& id, const BlockEval& ev ) {
    act.active_mul4.insert( id );
    act.adder_levels_active[id] = ev.levels;
    if ( options.trace )
    {
      ( *result.netlist_trace )[id] = ev.values;
    }
  };

  std::array<std::array<std::uint64_t, 3>, 3> partial{};
  bool spare_used = false;
  for ( int i = 0; i < 3; ++i )
  {
    for ( int j = 0; j < 3; ++j )
    {
      const auto id = ModuleId::block( q, i, j );
      const bool powered = static_cast<unsigned>( i ) < rows && static_cast<unsigned>( j ) < cols;
      const auto ai = ( a >> ( 4 * i ) ) & 0xFu;
      const auto bj = ( b >> ( 4 * j ) ) & 0xFu;
      const auto* fault = fault_on( id );
      const bool repaired = repair.enabled && repair.target == id;

      if ( fault && !repaired )
      {
        result.unrepaired.push_back( id );
      }

      if ( repaired )
      {
        act.disabled_faulty.insert( id );
        act.adder_levels_active[id] = 0;
        if ( powered )
        {
          const auto ev = eval_block( ai, bj );
          record( ModuleId::spare( q ), ev );
          partial[i][j] = ev.product;
          spare_used = true;
        }
      }
      else if ( !powered )
      {
        act.gated_mul4.insert( id );
        act.adder_levels_active[id] = 0;
      }
      else
      {
        const auto ev = eval_block( ai, bj );
        record( id, ev );
        partial[i][j] = fault ? fault->forced_output.value() : ev.product;
      }
    }
  }
  if ( !spare_used )
  {
    act.gated_mul4.insert( ModuleId::spare( q ) );
    act.adder_levels_active[ModuleId::spare( q )] = 0;
  }

  auto add24 = []( std::uint64_t x, std::uint64_t y ) {
    // carries out of the top bit are dropped, as in the ripple adder
    const auto m = BitVec::mask( 24u );
    return add( BitVec( 24u, x & m ), BitVec( 24u, y & m ), 24u ).truncate( 24u ).value();
  };
  std::array<std::uint64_t, 3> row_sum{};
  for ( int i = 0; i < 3; ++i )
  {
    row_sum[i] = add24( add24( partial[i][0], partial[i][1] << 4 ), partial[i][2] << 8 );
  }
  return add24( add24( row_sum[0], row_sum[1] << 4 ), row_sum[2] << 8 );
}

void finalize( MulResult& result )
{
  result.activity.power_proxy = static_cast<int>( result.activity.active_mul4.size() );
}

} // namespace

int adder_levels_active( const NetValues& values )
{
  const auto& nl = mul4_netlist();
  if ( values.size() != nl.net_count )
  {
    throw contract_error( "adder_levels_active expects the net values of a 4x4 block" );
  }
  std::array<bool, 4> busy{};
  for ( const auto& c : nl.cells )
  {
    if ( c.level >= level::first && c.level <= level::third )
    {
      for ( auto n : c.ins )
      {
        busy[c.level] = busy[c.level] || values[n] != 0u;
      }
    }
  }
  return static_cast<int>( std::count( busy.begin() + 1, busy.end(), true ) );
}

MulResult mul4( const BitVec& a, const BitVec& b, const MulOptions& options )
{
  require_width( a, 4u, "mul4" );
  require_width( b, 4u, "mul4" );

  MulResult result;
  if ( options.trace )
  {
    result.netlist_trace.emplace();
  }
  const auto id = ModuleId::block( Quadrant::LL, 0, 0 );
  auto ev = eval_block( a.value(), b.value() );
  result.product = BitVec( 8u, ev.product );
  result.activity.active_mul4.insert( id );
  result.activity.adder_levels_active[id] = ev.levels;
  if ( options.trace )
  {
    ( *result.netlist_trace )[id] = std::move( ev.values );
  }
  finalize( result );
  return result;
}

MulResult mul12( const BitVec& a, const BitVec& b, std::span<const FaultSpec> faults, const RepairConfig& repair,
                 Quadrant quadrant, const MulOptions& options )
{
  require_width( a, 12u, "mul12" );
  require_width( b, 12u, "mul12" );
  validate_faults( faults );
  for ( const auto& f : faults )
  {
    if ( f.target.quadrant != quadrant )
    {
      throw config_error( "fault " + f.target.to_string() + " does not belong to quadrant " + to_string( quadrant ) );
    }
  }
  validate_repair( repair, quadrant );

  MulResult result;
  if ( options.trace )
  {
    result.netlist_trace.emplace();
  }
  const auto p = run_quadrant( quadrant, a.value(), b.value(), faults, repair, false, options, result );
  result.product = BitVec( 24u, p );
  finalize( result );
  return result;
}

MulResult mul24( const BitVec& a, const BitVec& b, std::span<const FaultSpec> faults, const RepairSet& repair,
                 const MulOptions& options )
{
  require_width( a, 24u, "mul24" );
  require_width( b, 24u, "mul24" );
  validate_faults( faults );
  for ( auto q : all_quadrants )
  {
    validate_repair( repair[static_cast<int>( q )], q );
  }

  MulResult result;
  if ( options.trace )
  {
    result.netlist_trace.emplace();
  }

  bool a_narrow = false, b_narrow = false;
  if ( options.gating )
  {
    a_narrow = classify_width( a, { 12u, 24u } ) == 12u;
    b_narrow = classify_width( b, { 12u, 24u } ) == 12u;
  }

  const auto al = a.value() & 0xFFFu, ah = a.value() >> 12;
  const auto bl = b.value() & 0xFFFu, bh = b.value() >> 12;

  std::array<std::uint64_t, 4> quad{};
  for ( auto q : all_quadrants )
  {
    const auto qi = static_cast<int>( q );
    std::vector<FaultSpec> qf;
    std::copy_if( faults.begin(), faults.end(), std::back_inserter( qf ),
                  [&]( const auto& f ) { return f.target.quadrant == q; } );

    const bool a_hi = q == Quadrant::HH || q == Quadrant::HL;
    const bool b_hi = q == Quadrant::HH || q == Quadrant::LH;
    const bool gated = ( a_hi && a_narrow ) || ( b_hi && b_narrow );
    quad[qi] = run_quadrant( q, a_hi ? ah : al, b_hi ? bh : bl, qf, repair[qi], gated, options, result );
  }

  auto add48 = []( std::uint64_t x, std::uint64_t y ) {
    // carries out of the top bit are dropped, as in the ripple adder
    const auto m = BitVec::mask( 48u );
    return add( BitVec( 48u, x & m ), BitVec( 48u, y & m ), 48u ).truncate( 48u ).value();
  };
  const auto mid = add48( quad[static_cast<int>( Quadrant::HL )], quad[static_cast<int>( Quadrant::LH )] );
  auto p = add48( quad[static_cast<int>( Quadrant::LL )], mid << 12 );
  p = add48( p, quad[static_cast<int>( Quadrant::HH )] << 24 );

  result.product = BitVec( 48u, p );
  std::sort( result.unrepaired.begin(), result.unrepaired.end() );
  finalize( result );
  return result;
}

} // namespace cifm
