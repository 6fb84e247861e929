#pragma once

#include "cifm/netlist.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cifm::rev {

/// A gate definition failed its bijectivity or embedding check.
class gate_error : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/*! \brief k-line reversible gate stored as a permutation truth table.
 *
 * Bit i of a pattern is the value on the gate's i-th line, so for a gate
 * applied to lines (l0, l1, l2) line l0 is the least significant bit.
 */
class RevGate
{
public:
  RevGate( std::string name, unsigned arity, std::vector<std::uint32_t> mapping );

  const std::string& name() const noexcept { return name_; }
  unsigned arity() const noexcept { return arity_; }
  std::uint32_t apply( std::uint32_t pattern ) const { return forward_[pattern]; }
  std::uint32_t invert( std::uint32_t pattern ) const { return inverse_[pattern]; }
  const std::vector<std::uint32_t>& mapping() const noexcept { return forward_; }

private:
  std::string name_;
  unsigned arity_;
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> inverse_;
};

/// TSG: P = A, Q = A'C' ^ B', R = Q ^ D, S = Q.D ^ (AB ^ C).
RevGate make_tsg();

/// New Gate: P = A, Q = AB ^ C, R = A'C' ^ B'.
RevGate make_new_gate();

struct StandardGates
{
  RevGate not_gate;
  RevGate feynman;
  RevGate toffoli;
  RevGate fredkin; ///< line 0 is the control; lines 1 and 2 swap when it is 1
};

StandardGates make_standard_gates();

/// Shared immutable instance by name: NOT, FEYNMAN, TOFFOLI, FREDKIN, NG, TSG.
std::shared_ptr<const RevGate> gate_by_name( std::string_view name );

enum class LineTag : std::uint8_t
{
  PrimaryInput,
  Ancilla
};

struct Line
{
  LineTag tag = LineTag::Ancilla;
  bool constant = false; ///< initial value of an ancilla
  std::string port;      ///< primary inputs only
  unsigned bit = 0u;
};

struct GateApplication
{
  std::shared_ptr<const RevGate> gate;
  std::vector<std::size_t> lines;
};

enum class RoleKind : std::uint8_t
{
  PrimaryOutput,
  Garbage,
  RestoredConstant
};

struct OutputRole
{
  RoleKind kind = RoleKind::Garbage;
  std::string port; ///< primary outputs only
  unsigned bit = 0u;
};

struct RevNetlist
{
  std::vector<Line> lines;
  std::vector<GateApplication> gates;
  std::vector<OutputRole> output_roles; ///< one per line, after the last gate

  std::size_t add_input( std::string port, unsigned bit );
  std::size_t add_ancilla( bool constant );
  void apply( std::shared_ptr<const RevGate> gate, std::vector<std::size_t> lines );
  void apply( std::string_view gate_name, std::vector<std::size_t> lines );
};

/// Throws cifm::contract_error on repeated lines, arity mismatch or a role
/// table whose size differs from the line count.
void validate( const RevNetlist& netlist );

using State = std::vector<std::uint8_t>;

/// Initial line state from primary-input values given in line order.
State initial_state( const RevNetlist& netlist, std::span<const std::uint8_t> primary_inputs );

/// Initial line state from per-port words (e.g. {"a", 7}, {"b", 6}).
State initial_state( const RevNetlist& netlist, const std::map<std::string, std::uint64_t>& words );

void run_forward( const RevNetlist& netlist, State& state );
void run_backward( const RevNetlist& netlist, State& state );

State simulate( const RevNetlist& netlist, std::span<const std::uint8_t> primary_inputs );
State simulate( const RevNetlist& netlist, const std::map<std::string, std::uint64_t>& words );
State simulate_inverse( const RevNetlist& netlist, State final_state );

/// Primary outputs of a final state gathered into per-port words.
std::map<std::string, std::uint64_t> read_outputs( const RevNetlist& netlist, const State& final_state );

struct Metrics
{
  std::size_t gate_count = 0u;
  std::size_t garbage_count = 0u;
  std::size_t ancilla_count = 0u;
  std::size_t unit_delay = 0u;

  friend bool operator==( const Metrics&, const Metrics& ) = default;
};

Metrics metrics_of( const RevNetlist& netlist );

/// Checks RESTORED_CONSTANT lines by simulation: exhaustively when there are
/// at most `exhaustive_limit` primary inputs, otherwise on `samples` random
/// input vectors drawn with `seed`.
bool restored_constants_hold( const RevNetlist& netlist, unsigned exhaustive_limit = 16u,
                              std::size_t samples = 1000u, std::uint64_t seed = 0u );

enum class FullAdderVariant : std::uint8_t
{
  Tsg,              ///< one TSG
  NgNgFeynman,      ///< two New Gates and a Feynman
  NgToffoliFeynman, ///< New Gate, Toffoli and Feynman
  Fredkin5          ///< five Fredkin gates
};

/// Inputs a, b, cin; outputs sum, carry.
RevNetlist build_full_adder( FullAdderVariant variant );

/*! \brief Mechanical reversible embedding of a cell netlist.
 *
 * AND becomes a Toffoli onto a fresh 0-ancilla, HA a New Gate and FA a TSG
 * (C tied to a 0-ancilla in both). OR is a Toffoli plus two Feynman gates and
 * MUX a single Fredkin. A net with n > 1 consumers (cell inputs and output
 * bits) gets n - 1 Feynman copies onto fresh 0-ancillas. Output bits become
 * PRIMARY_OUTPUT lines; everything else is GARBAGE.
 */
RevNetlist expand( const CellNetlist& netlist );

} // namespace cifm::rev
