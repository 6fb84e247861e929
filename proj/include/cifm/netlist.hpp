#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cifm {

using NetId = std::uint32_t;

/// Combinational cell kinds. The multiplier datapath uses only And, HalfAdder
/// and FullAdder; Or and Mux appear in the checker/repair control logic.
enum class CellKind : std::uint8_t
{
  And,
  HalfAdder,
  FullAdder,
  Or,
  Mux ///< ins (sel, d0, d1), out = sel ? d1 : d0
};

std::string_view to_string( CellKind kind );
std::optional<CellKind> cell_kind_from_string( std::string_view name );

std::size_t input_arity( CellKind kind );
std::size_t output_arity( CellKind kind );

/// Level tags used for cells. 1..3 are the three adder levels of a 4x4 block.
namespace level {
constexpr int partial_product = 0;
constexpr int first = 1;
constexpr int second = 2;
constexpr int third = 3;
constexpr int combine12 = 4;
constexpr int combine24 = 5;
constexpr int control = 6;
} // namespace level

struct Cell
{
  CellKind kind;
  std::vector<NetId> ins;
  std::vector<NetId> outs; ///< HA/FA: (sum, carry)
  int level = 0;
  std::string module_id;
};

/// A named bus; nets are listed LSB first.
struct Port
{
  std::string name;
  std::vector<NetId> nets;
};

/*! \brief Structural netlist of AND/HA/FA (and control) cells.
 *
 * Nets are dense indices `0 .. net_count - 1`. Primary inputs are created
 * first; every other net is driven by exactly one cell, and cells are stored
 * in topological order.
 */
struct CellNetlist
{
  std::vector<Port> inputs;
  std::vector<Cell> cells;
  std::vector<Port> outputs;
  std::size_t net_count = 0;
  /// Product nets of each 4x4 block keyed by module id, before any gating or
  /// repair muxing. Fault injection overrides these nets.
  std::map<std::string, std::vector<NetId>> block_outputs;

  const Port& input( std::string_view name ) const;
  const Port& output( std::string_view name ) const;
};

/// Throws contract_error on arity mismatch, multiple drivers, use before
/// definition or dangling port references.
void validate( const CellNetlist& netlist );

class NetlistBuilder
{
public:
  std::vector<NetId> add_input( std::string name, unsigned width );
  std::vector<NetId> add_cell( CellKind kind, std::vector<NetId> ins, int level, const std::string& module_id );
  void add_output( std::string name, std::vector<NetId> nets );
  void tag_block( const std::string& module_id, std::vector<NetId> nets );

  NetId and2( NetId a, NetId b, int lvl, const std::string& module_id );
  NetId or2( NetId a, NetId b, int lvl, const std::string& module_id );
  NetId mux2( NetId sel, NetId d0, NetId d1, int lvl, const std::string& module_id );
  NetId or_reduce( std::span<const NetId> nets, int lvl, const std::string& module_id );

  /// Ripple adder over sparse operands (nullopt = constant zero bit). Bit
  /// positions with a single live signal and no carry pass through without a
  /// cell. The returned vector has max(x.size(), y.size()) + 1 entries.
  std::vector<std::optional<NetId>> ripple_add( std::span<const std::optional<NetId>> x,
                                                std::span<const std::optional<NetId>> y,
                                                int lvl, const std::string& module_id );

  CellNetlist finish() &&;

private:
  NetId fresh() { return static_cast<NetId>( netlist_.net_count++ ); }

  CellNetlist netlist_;
};

using NetValues = std::vector<std::uint8_t>;

/// Forced net values, applied when the net's driver evaluates.
using NetOverrides = std::map<NetId, std::uint8_t>;

/// Zero-delay functional evaluation. `input_words` follows the order of
/// `netlist.inputs`.
NetValues evaluate( const CellNetlist& netlist, std::span<const std::uint64_t> input_words,
                    const NetOverrides& overrides = {} );

std::uint64_t read_port( const Port& port, const NetValues& values );

/// Evaluates and returns one word per output port.
std::vector<std::uint64_t> evaluate_words( const CellNetlist& netlist, std::span<const std::uint64_t> input_words,
                                           const NetOverrides& overrides = {} );

struct CellCensus
{
  std::size_t total = 0;
  std::map<CellKind, std::size_t> by_kind;
  std::size_t logic_depth = 0; ///< longest cell chain, one unit per cell
};

CellCensus census( const CellNetlist& netlist );

} // namespace cifm
