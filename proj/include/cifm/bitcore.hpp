#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cifm {

/// Raised when a caller breaks an operation's precondition (width mismatch,
/// value that does not fit its width, malformed netlist).
class contract_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/*! \brief Fixed-width unsigned bit vector.
 *
 * Every operand, partial product and result in the multiplier datapath is a
 * BitVec. Widths up to 64 bits are representable; the datapath itself never
 * exceeds 48.
 */
class BitVec
{
public:
  static constexpr unsigned max_width = 64u;

  BitVec( unsigned width, std::uint64_t value = 0u );

  unsigned width() const noexcept { return width_; }
  std::uint64_t value() const noexcept { return value_; }

  bool bit( unsigned index ) const;

  /// Bits [lo, lo + count) as a BitVec of width `count`.
  BitVec slice( unsigned lo, unsigned count ) const;

  /// Same value in a wider (or equal) width.
  BitVec zero_extend( unsigned new_width ) const;

  /// Low `new_width` bits; this is the only way the datapath drops bits.
  BitVec truncate( unsigned new_width ) const;

  std::string to_hex() const;

  friend bool operator==( const BitVec&, const BitVec& ) = default;

  static std::uint64_t mask( unsigned width ) noexcept
  {
    return width >= 64u ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << width ) - 1u;
  }

private:
  unsigned width_;
  std::uint64_t value_;
};

struct BitPair
{
  bool sum;
  bool carry;

  friend bool operator==( const BitPair&, const BitPair& ) = default;
};

constexpr BitPair half_add( bool a, bool b ) noexcept
{
  return { a != b, a && b };
}

constexpr BitPair full_add( bool a, bool b, bool cin ) noexcept
{
  return { ( a != b ) != cin, ( a && b ) || ( cin && ( a != b ) ) };
}

/// Ripple-carry sum of two equal-width vectors. The carry-out is kept, so the
/// result is `width + 1` bits wide.
BitVec add( const BitVec& a, const BitVec& b, unsigned width );

/// Smallest class c in `classes` (ascending) with x.value < 2^c. Zero falls in
/// the first class.
unsigned classify_width( const BitVec& x, std::span<const unsigned> classes );

inline unsigned classify_width( const BitVec& x, std::initializer_list<unsigned> classes )
{
  return classify_width( x, std::span<const unsigned>( classes.begin(), classes.size() ) );
}

} // namespace cifm
