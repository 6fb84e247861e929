#pragma once

#include "cifm/fp32.hpp"
#include "cifm/multiplier.hpp"
#include "cifm/netlist.hpp"
#include "cifm/revlogic.hpp"

#include <json.hpp>

namespace cifm {

using json = nlohmann::ordered_json;

/// {"inputs": [{name, width, nets}], "cells": [{kind, ins, outs, level,
/// module_id}], "outputs": [{name: "p0", net}]}; nets are named "n<index>".
json to_json( const CellNetlist& netlist );
CellNetlist cell_netlist_from_json( const json& j );

json to_json( const ModuleId& id );
json to_json( const ActivityReport& report );

json to_json( const fp::FpMulTrace& trace );

namespace rev {

/// {"lines": [{tag, ...}], "gates": [{ordinal, name, lines}], "output_roles": [...]}
json to_json( const RevNetlist& netlist );
RevNetlist rev_netlist_from_json( const json& j );

/// Keys follow the comparison table headings ("No of Gates", ...).
json to_json( const Metrics& metrics );

} // namespace rev

} // namespace cifm
