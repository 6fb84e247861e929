#pragma once

#include "cifm/bitcore.hpp"
#include "cifm/netlist.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cifm {

/// Inconsistent fault or repair setup (e.g. a repair target with the enable
/// bit cleared).
class config_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Which 12x12 module of the 24x24 block: AH*BH, AH*BL, AL*BH, AL*BL.
enum class Quadrant : std::uint8_t
{
  HH,
  HL,
  LH,
  LL
};

constexpr std::array<Quadrant, 4> all_quadrants{ Quadrant::HH, Quadrant::HL, Quadrant::LH, Quadrant::LL };

std::string to_string( Quadrant q );
std::optional<Quadrant> quadrant_from_string( std::string_view s );

/// Address of one 4x4 block. Row i selects operand group A_i, col j selects
/// B_j (group 0 is least significant). The redundant block of a quadrant
/// ignores row/col.
struct ModuleId
{
  Quadrant quadrant = Quadrant::LL;
  int row = 0;
  int col = 0;
  bool redundant = false;

  static ModuleId block( Quadrant q, int row, int col ) { return { q, row, col, false }; }
  static ModuleId spare( Quadrant q ) { return { q, 0, 0, true }; }

  /// "LL:1:2" for a regular block, "LL:R" for the spare.
  std::string to_string() const;

  friend auto operator<=>( const ModuleId&, const ModuleId& ) = default;
};

/// Every block of a quadrant: nine regular blocks followed by the spare.
std::vector<ModuleId> quadrant_blocks( Quadrant q );

/// All 40 instantiated blocks of the 24x24 multiplier.
std::vector<ModuleId> all_blocks();

/// A faulty block emits `forced_output` whatever its operands are.
struct FaultSpec
{
  ModuleId target;
  BitVec forced_output{ 8u, 0u };
};

/// Per-quadrant repair routing: with `enabled` set, the spare takes over the
/// `target` block's operands and its product replaces the target's.
struct RepairConfig
{
  bool enabled = false;
  std::optional<ModuleId> target;

  static RepairConfig on( ModuleId id ) { return { true, id }; }
};

using RepairSet = std::array<RepairConfig, 4>; ///< indexed by Quadrant

struct ActivityReport
{
  std::set<ModuleId> active_mul4;
  std::set<ModuleId> gated_mul4;
  std::set<ModuleId> disabled_faulty;
  std::map<ModuleId, int> adder_levels_active;
  int power_proxy = 0;

  /// Report for a datapath that did not run at all: every block is gated.
  static ActivityReport idle();
};

struct MulOptions
{
  bool gating = true; ///< false forces every checker to report full width
  bool trace = false; ///< record the net values of every evaluated block
};

struct MulResult
{
  BitVec product{ 8u, 0u };
  ActivityReport activity;
  std::vector<ModuleId> unrepaired;
  /// Net values of each evaluated 4x4 block netlist (see export_netlist).
  std::optional<std::map<ModuleId, NetValues>> netlist_trace;
};

MulResult mul4( const BitVec& a, const BitVec& b, const MulOptions& options = {} );

/// One 12x12 module. Faults must address `quadrant`; the standalone module
/// defaults to LL.
MulResult mul12( const BitVec& a, const BitVec& b, std::span<const FaultSpec> faults = {},
                 const RepairConfig& repair = {}, Quadrant quadrant = Quadrant::LL,
                 const MulOptions& options = {} );

MulResult mul24( const BitVec& a, const BitVec& b, std::span<const FaultSpec> faults = {},
                 const RepairSet& repair = {}, const MulOptions& options = {} );

inline const ActivityReport& activity_of( const MulResult& result ) { return result.activity; }

enum class NetlistLevel
{
  Mul4,
  Mul12,
  Mul24
};

/// Structural netlist of the ungated, fault-free datapath. Inputs `a`, `b`;
/// output `p`.
CellNetlist export_netlist( NetlistLevel level );

/*! \brief Datapath with checker and repair control logic instantiated.
 *
 * Adds the width checkers, per-block output isolation, the spare block per
 * quadrant and its operand/product muxes. Extra inputs per quadrant Q:
 * `e_Q` (repair enable), `rsel_Q` and `csel_Q` (one-hot row/col select).
 * Only Mul12 (quadrant LL) and Mul24 are supported.
 */
CellNetlist export_featured_netlist( NetlistLevel level );

/// Input words for a featured netlist: operands followed by each quadrant's
/// repair enable and one-hot selects, encoded from `repair`.
std::vector<std::uint64_t> featured_input_words( NetlistLevel level, std::uint64_t a, std::uint64_t b,
                                                 const RepairSet& repair = {} );

/// Net overrides that force each faulty block's product nets.
NetOverrides fault_overrides( const CellNetlist& netlist, std::span<const FaultSpec> faults );

/// Per-level activity of one evaluated 4x4 block netlist: a level is active
/// when any input net of one of its cells is nonzero.
int adder_levels_active( const NetValues& mul4_values );

} // namespace cifm
