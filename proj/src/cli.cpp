#include "cifm/cli.hpp"

#include "cifm/fp32.hpp"
#include "cifm/json_io.hpp"
#include "cifm/multiplier.hpp"
#include "cifm/revlogic.hpp"
#include "cifm/verify.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <random>
#include <regex>

namespace cifm::cli {

namespace {

struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_hex( const std::string& text, std::size_t exact_digits = 0u )
{
  std::string_view s = text;
  if ( s.starts_with( "0x" ) || s.starts_with( "0X" ) )
  {
    s.remove_prefix( 2u );
  }
  if ( s.empty() || s.size() > 16u || ( exact_digits && s.size() != exact_digits ) )
  {
    throw usage_error( "malformed hex operand '" + text + "'" +
                       ( exact_digits ? " (expected " + std::to_string( exact_digits ) + " hex digits)" : "" ) );
  }
  std::uint64_t v = 0u;
  const auto [end, ec] = std::from_chars( s.data(), s.data() + s.size(), v, 16 );
  if ( ec != std::errc{} || end != s.data() + s.size() )
  {
    throw usage_error( "malformed hex operand '" + text + "'" );
  }
  return v;
}

std::string hex( std::uint64_t v, int digits = 0 )
{
  char buf[32];
  std::snprintf( buf, sizeof( buf ), "0x%0*llX", digits, static_cast<unsigned long long>( v ) );
  return buf;
}

const std::regex module_pattern( R"(^(HH|HL|LH|LL):([0-2]):([0-2])$)" );

ModuleId parse_module( const std::string& text )
{
  std::smatch m;
  if ( !std::regex_match( text, m, module_pattern ) )
  {
    throw usage_error( "malformed block address '" + text + "' (expected QUADRANT:row:col)" );
  }
  return ModuleId::block( *quadrant_from_string( m[1].str() ), std::stoi( m[2].str() ), std::stoi( m[3].str() ) );
}

/// QUADRANT:row:col=0xVV
FaultSpec parse_fault( const std::string& text )
{
  const auto eq = text.find( '=' );
  if ( eq == std::string::npos )
  {
    throw usage_error( "malformed fault '" + text + "' (expected QUADRANT:row:col=0xVV)" );
  }
  const auto value = parse_hex( text.substr( eq + 1u ) );
  if ( value > 0xFFu )
  {
    throw usage_error( "fault value in '" + text + "' does not fit 8 bits" );
  }
  return { parse_module( text.substr( 0u, eq ) ), BitVec( 8u, value ) };
}

struct MulArgs
{
  unsigned width = 24u;
  std::string a, b;
  std::vector<std::string> faults, repairs;
  bool report = false;
  bool no_gating = false;
};

int cmd_mul( const MulArgs& args, std::ostream& out )
{
  const auto a = parse_hex( args.a ), b = parse_hex( args.b );
  if ( a > BitVec::mask( args.width ) || b > BitVec::mask( args.width ) )
  {
    throw std::out_of_range( "operand does not fit in " + std::to_string( args.width ) + " bits" );
  }

  std::vector<FaultSpec> faults;
  for ( const auto& f : args.faults )
  {
    faults.push_back( parse_fault( f ) );
  }
  RepairSet repair{};
  for ( const auto& r : args.repairs )
  {
    const auto id = parse_module( r );
    auto& slot = repair[static_cast<int>( id.quadrant )];
    if ( slot.enabled )
    {
      throw usage_error( "only one repair per quadrant (one spare block each)" );
    }
    slot = RepairConfig::on( id );
  }

  MulOptions options;
  options.gating = !args.no_gating;

  MulResult result;
  switch ( args.width )
  {
  case 4u:
    if ( !faults.empty() || !args.repairs.empty() )
    {
      throw usage_error( "--fault/--repair need --width 12 or 24" );
    }
    result = mul4( BitVec( 4u, a ), BitVec( 4u, b ), options );
    break;
  case 12u:
    for ( auto q : { Quadrant::HH, Quadrant::HL, Quadrant::LH } )
    {
      if ( repair[static_cast<int>( q )].enabled )
      {
        throw usage_error( "the standalone 12x12 module is quadrant LL" );
      }
    }
    for ( const auto& f : faults )
    {
      if ( f.target.quadrant != Quadrant::LL )
      {
        throw usage_error( "the standalone 12x12 module is quadrant LL" );
      }
    }
    result = mul12( BitVec( 12u, a ), BitVec( 12u, b ), faults, repair[static_cast<int>( Quadrant::LL )],
                    Quadrant::LL, options );
    break;
  default:
    result = mul24( BitVec( 24u, a ), BitVec( 24u, b ), faults, repair, options );
    break;
  }

  if ( !args.report )
  {
    out << result.product.to_hex() << '\n';
    return exit_code::ok;
  }
  auto unrepaired = json::array();
  for ( const auto& id : result.unrepaired )
  {
    unrepaired.push_back( to_json( id ) );
  }
  const json j{ { "product", result.product.to_hex() },
                { "width", result.product.width() },
                { "unrepaired", unrepaired },
                { "activity", to_json( result.activity ) } };
  out << j.dump( 2 ) << '\n';
  return exit_code::ok;
}

int cmd_fpmul( const std::string& a_text, const std::string& b_text, bool truncate, bool trace, std::ostream& out )
{
  const auto a = static_cast<std::uint32_t>( parse_hex( a_text, 8u ) );
  const auto b = static_cast<std::uint32_t>( parse_hex( b_text, 8u ) );
  const auto r = fp::fp_mul( a, b, {}, {}, truncate ? fp::Rounding::Truncate : fp::Rounding::NearestEven );
  if ( !trace )
  {
    out << hex( r.bits, 8 ) << '\n';
    return exit_code::ok;
  }
  const json j{ { "result", hex( r.bits, 8 ) }, { "trace", to_json( r.trace ) } };
  out << j.dump( 2 ) << '\n';
  return exit_code::ok;
}

int cmd_verify( const std::string& suite, std::uint64_t seed, std::size_t count, std::ostream& out,
                std::ostream& err )
{
  const auto r = verify::run_suite( suite, { seed, count } );
  if ( !r )
  {
    throw usage_error( "unknown verification suite '" + suite + "'" );
  }
  out << r->suite << ": " << r->passed << "/" << r->total << " " << r->unit << " pass" << ( r->ok() ? "" : " FAILED" )
      << '\n';
  for ( const auto& f : r->failures )
  {
    err << "  failure: " << f << '\n';
  }
  return r->ok() ? exit_code::ok : exit_code::check_failed;
}

std::optional<rev::FullAdderVariant> adder_variant( const std::string& name )
{
  if ( name == "fa-tsg" )
    return rev::FullAdderVariant::Tsg;
  if ( name == "fa-ng2" )
    return rev::FullAdderVariant::NgNgFeynman;
  if ( name == "fa-ng-toffoli" )
    return rev::FullAdderVariant::NgToffoliFeynman;
  if ( name == "fa-fredkin5" )
    return rev::FullAdderVariant::Fredkin5;
  return std::nullopt;
}

std::optional<rev::RevNetlist> reversible_circuit( const std::string& name )
{
  if ( const auto v = adder_variant( name ) )
    return rev::build_full_adder( *v );
  if ( name == "mul4-rev" )
    return rev::expand( export_netlist( NetlistLevel::Mul4 ) );
  if ( name == "mul12-rev" )
    return rev::expand( export_netlist( NetlistLevel::Mul12 ) );
  if ( name == "cifm-rev" )
    return rev::expand( export_netlist( NetlistLevel::Mul24 ) );
  return std::nullopt;
}

std::optional<CellNetlist> classical_circuit( const std::string& name )
{
  if ( name == "mul4" )
    return export_netlist( NetlistLevel::Mul4 );
  if ( name == "mul12" )
    return export_netlist( NetlistLevel::Mul12 );
  if ( name == "mul24" )
    return export_netlist( NetlistLevel::Mul24 );
  if ( name == "mul12-features" )
    return export_featured_netlist( NetlistLevel::Mul12 );
  if ( name == "mul24-features" )
    return export_featured_netlist( NetlistLevel::Mul24 );
  return std::nullopt;
}

json census_json( const std::string& name, const CellCensus& c )
{
  json kinds = json::object();
  for ( const auto& [k, n] : c.by_kind )
  {
    kinds[std::string( to_string( k ) )] = n;
  }
  return { { "circuit", name }, { "cells", c.total }, { "by_kind", kinds }, { "unit_delay_levels", c.logic_depth } };
}

void print_rev_row( std::ostream& out, const std::string& name, const rev::Metrics& m )
{
  out << std::left << std::setw( 16 ) << name << std::right << std::setw( 8 ) << m.gate_count << std::setw( 10 )
      << m.garbage_count << std::setw( 10 ) << m.ancilla_count << std::setw( 12 ) << m.unit_delay << '\n';
}

void print_rev_header( std::ostream& out )
{
  out << std::left << std::setw( 16 ) << "circuit" << std::right << std::setw( 8 ) << "gates" << std::setw( 10 )
      << "garbage" << std::setw( 10 ) << "ancilla" << std::setw( 12 ) << "unit_delay" << '\n';
}

void print_census_row( std::ostream& out, const std::string& name, const CellCensus& c )
{
  auto count = [&]( CellKind k ) {
    const auto it = c.by_kind.find( k );
    return it == c.by_kind.end() ? std::size_t{ 0 } : it->second;
  };
  out << std::left << std::setw( 16 ) << name << std::right << std::setw( 8 ) << c.total << std::setw( 7 )
      << count( CellKind::And ) << std::setw( 7 ) << count( CellKind::HalfAdder ) << std::setw( 7 )
      << count( CellKind::FullAdder ) << std::setw( 7 ) << count( CellKind::Or ) << std::setw( 7 )
      << count( CellKind::Mux ) << std::setw( 8 ) << c.logic_depth << '\n';
}

void print_census_header( std::ostream& out )
{
  out << std::left << std::setw( 16 ) << "circuit" << std::right << std::setw( 8 ) << "cells" << std::setw( 7 ) << "AND"
      << std::setw( 7 ) << "HA" << std::setw( 7 ) << "FA" << std::setw( 7 ) << "OR" << std::setw( 7 ) << "MUX"
      << std::setw( 8 ) << "levels" << '\n';
}

int cmd_metrics( const std::string& circuit, bool as_json, std::ostream& out )
{
  if ( const auto r = reversible_circuit( circuit ) )
  {
    const auto m = rev::metrics_of( *r );
    if ( as_json )
    {
      auto j = json{ { "circuit", circuit } };
      j.update( rev::to_json( m ) );
      out << j.dump( 2 ) << '\n';
    }
    else
    {
      print_rev_header( out );
      print_rev_row( out, circuit, m );
    }
    return exit_code::ok;
  }
  if ( const auto c = classical_circuit( circuit ) )
  {
    const auto cs = census( *c );
    if ( as_json )
    {
      out << census_json( circuit, cs ).dump( 2 ) << '\n';
    }
    else
    {
      print_census_header( out );
      print_census_row( out, circuit, cs );
    }
    return exit_code::ok;
  }
  throw usage_error( "unknown circuit '" + circuit + "'" );
}

int cmd_netlist( const std::string& target, bool features, const std::string& path, std::ostream& out )
{
  json j;
  if ( target == "mul4-rev" || target == "cifm-rev" )
  {
    if ( features )
    {
      throw usage_error( "--features applies to classical netlists only" );
    }
    j = rev::to_json( *reversible_circuit( target ) );
  }
  else
  {
    NetlistLevel lvl;
    if ( target == "mul4" )
      lvl = NetlistLevel::Mul4;
    else if ( target == "mul12" )
      lvl = NetlistLevel::Mul12;
    else if ( target == "mul24" )
      lvl = NetlistLevel::Mul24;
    else
      throw usage_error( "unknown netlist target '" + target + "'" );
    if ( features && lvl == NetlistLevel::Mul4 )
    {
      throw usage_error( "the 4x4 block has no checker or repair logic" );
    }
    j = to_json( features ? export_featured_netlist( lvl ) : export_netlist( lvl ) );
  }

  const auto text = j.dump( 1 );
  if ( path.empty() || path == "-" )
  {
    out << text << '\n';
    return exit_code::ok;
  }
  std::ofstream file( path, std::ios::binary );
  file << text << '\n';
  file.close();
  if ( !file )
  {
    throw io_error( "cannot write " + path );
  }
  return exit_code::ok;
}

/// Full-adder comparison plus the datapath cost with and without the checker
/// and repair logic. Fails unless the featured build is strictly larger and
/// still computes exact products.
int cmd_report( bool as_json, std::uint64_t seed, std::ostream& out )
{
  struct Row
  {
    std::string name;
    rev::Metrics m;
  };
  std::vector<Row> adders;
  for ( const auto* name : { "fa-tsg", "fa-ng2", "fa-ng-toffoli", "fa-fredkin5" } )
  {
    adders.push_back( { name, rev::metrics_of( *reversible_circuit( name ) ) } );
  }

  const auto plain = export_netlist( NetlistLevel::Mul24 );
  const auto featured = export_featured_netlist( NetlistLevel::Mul24 );
  const auto cp = census( plain ), cf = census( featured );

  std::mt19937_64 rng( seed );
  std::size_t exact = 0u;
  constexpr std::size_t samples = 200u;
  for ( std::size_t i = 0u; i < samples; ++i )
  {
    const auto a = verify::random_operand( rng, 24u ), b = verify::random_operand( rng, 24u );
    const std::uint64_t in[2] = { a, b };
    const auto words = featured_input_words( NetlistLevel::Mul24, a, b );
    const bool ok = evaluate_words( plain, in ).front() == a * b && evaluate_words( featured, words ).front() == a * b;
    exact += ok ? 1u : 0u;
  }
  const bool pass = cf.total > cp.total && exact == samples;

  if ( as_json )
  {
    auto rows = json::array();
    for ( const auto& r : adders )
    {
      auto j = json{ { "circuit", r.name } };
      j.update( rev::to_json( r.m ) );
      rows.push_back( j );
    }
    const json j{ { "full_adders", rows },
                  { "datapath", { census_json( "mul24", cp ), census_json( "mul24-features", cf ) } },
                  { "exact_products", exact },
                  { "samples", samples },
                  { "pass", pass } };
    out << j.dump( 2 ) << '\n';
  }
  else
  {
    out << "reversible full adders\n";
    print_rev_header( out );
    for ( const auto& r : adders )
    {
      print_rev_row( out, r.name, r.m );
    }
    out << "\n24x24 datapath cost (unit-delay levels = longest cell chain)\n";
    print_census_header( out );
    print_census_row( out, "mul24", cp );
    print_census_row( out, "mul24-features", cf );
    out << "\nextra cells for checkers and repair: " << ( cf.total - cp.total ) << " ("
        << std::fixed << std::setprecision( 2 ) << 100.0 * static_cast<double>( cf.total - cp.total ) / static_cast<double>( cp.total )
        << "%), extra levels: " << static_cast<long>( cf.logic_depth ) - static_cast<long>( cp.logic_depth ) << '\n';
    out << "exact products on " << exact << "/" << samples << " random pairs (both builds)\n";
  }
  return pass ? exit_code::ok : exit_code::check_failed;
}

} // namespace

int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Combined integer / floating-point multiplier simulator and netlist toolkit", "cifm" };
  app.require_subcommand( 1, 1 );

  MulArgs mul_args;
  auto* mul = app.add_subcommand( "mul", "Integer multiply on the 4x4, 12x12 or 24x24 datapath" );
  mul->add_option( "--width", mul_args.width, "Operand width" )->check( CLI::IsMember( { 4u, 12u, 24u } ) );
  mul->add_option( "a", mul_args.a, "First operand (hex)" )->required();
  mul->add_option( "b", mul_args.b, "Second operand (hex)" )->required();
  mul->add_option( "--fault", mul_args.faults, "Inject a forced block output, QUADRANT:row:col=0xVV" );
  mul->add_option( "--repair", mul_args.repairs, "Route a block to its quadrant's spare, QUADRANT:row:col" );
  mul->add_flag( "--report", mul_args.report, "Print product and activity report as JSON" );
  mul->add_flag( "--no-gating", mul_args.no_gating, "Force every width checker to report full width" );

  std::string fa, fb;
  bool truncate = false, trace = false;
  auto* fpmul = app.add_subcommand( "fpmul", "Single-precision multiply of two 32-bit patterns" );
  fpmul->add_option( "a", fa, "First operand, 8 hex digits" )->required();
  fpmul->add_option( "b", fb, "Second operand, 8 hex digits" )->required();
  fpmul->add_flag( "--truncate", truncate, "Drop the low product bits instead of rounding to nearest even" );
  fpmul->add_flag( "--trace", trace, "Print the datapath trace as JSON" );

  std::string suite;
  std::uint64_t seed = 0u;
  std::size_t count = 0u;
  auto* verify_cmd = app.add_subcommand( "verify", "Run a verification sweep" );
  verify_cmd->add_option( "suite", suite, "Sweep name" )->required()->check( CLI::IsMember( verify::suite_names() ) );
  verify_cmd->add_option( "--seed", seed, "Random seed" );
  verify_cmd->add_option( "--count", count, "Random cases (0 = suite default)" );

  std::string target, path;
  bool features = false;
  auto* netlist = app.add_subcommand( "netlist", "Emit a netlist as JSON" );
  netlist->add_option( "target", target, "mul4, mul12, mul24, mul4-rev or cifm-rev" )->required();
  netlist->add_option( "-o,--output", path, "Output file (default stdout)" );
  netlist->add_flag( "--features", features, "Instantiate checker and repair logic (mul12, mul24)" );

  std::string circuit;
  bool as_json = false;
  auto* metrics = app.add_subcommand( "metrics", "Gate, garbage, ancilla and delay figures of a circuit" );
  metrics->add_option( "circuit", circuit,
                       "fa-tsg, fa-ng2, fa-ng-toffoli, fa-fredkin5, mul4-rev, mul12-rev, cifm-rev, mul4, mul12, "
                       "mul24, mul12-features, mul24-features" )
      ->required();
  metrics->add_flag( "--json", as_json, "Print JSON" );

  bool report_json = false;
  std::uint64_t report_seed = 0u;
  auto* report = app.add_subcommand( "report", "Full-adder comparison and datapath cost with/without features" );
  report->add_flag( "--json", report_json, "Print JSON" );
  report->add_option( "--seed", report_seed, "Random seed for the correctness spot check" );

  std::vector<const char*> argv;
  for ( const auto& a : args )
  {
    argv.push_back( a.c_str() );
  }

  try
  {
    app.parse( static_cast<int>( argv.size() ), argv.data() );
  }
  catch ( const CLI::CallForHelp& )
  {
    out << app.help();
    return exit_code::ok;
  }
  catch ( const CLI::ParseError& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }

  try
  {
    if ( *mul )
      return cmd_mul( mul_args, out );
    if ( *fpmul )
      return cmd_fpmul( fa, fb, truncate, trace, out );
    if ( *verify_cmd )
      return cmd_verify( suite, seed, count, out, err );
    if ( *netlist )
      return cmd_netlist( target, features, path, out );
    if ( *metrics )
      return cmd_metrics( circuit, as_json, out );
    if ( *report )
      return cmd_report( report_json, report_seed, out );
  }
  catch ( const usage_error& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  catch ( const config_error& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  catch ( const std::out_of_range& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_code::range;
  }
  catch ( const io_error& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_code::io;
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_code::check_failed;
  }
  return exit_code::usage;
}

} // namespace cifm::cli
