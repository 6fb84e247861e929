#include "cifm/bitcore.hpp"

#include <algorithm>
#include <cstdio>

namespace cifm {

BitVec::BitVec( unsigned width, std::uint64_t value )
    : width_( width ), value_( value )
{
  if ( width == 0u || width > max_width )
  {
    throw contract_error( "BitVec width must be in [1, 64], got " + std::to_string( width ) );
  }
  if ( ( value & ~mask( width ) ) != 0u )
  {
    throw contract_error( "value does not fit in " + std::to_string( width ) + " bits" );
  }
}

bool BitVec::bit( unsigned index ) const
{
  if ( index >= width_ )
  {
    throw contract_error( "bit index out of range" );
  }
  return ( value_ >> index ) & 1u;
}

BitVec BitVec::slice( unsigned lo, unsigned count ) const
{
  if ( count == 0u || lo + count > width_ )
  {
    throw contract_error( "slice out of range" );
  }
  return BitVec( count, ( value_ >> lo ) & mask( count ) );
}

BitVec BitVec::zero_extend( unsigned new_width ) const
{
  if ( new_width < width_ )
  {
    throw contract_error( "zero_extend cannot narrow" );
  }
  return BitVec( new_width, value_ );
}

BitVec BitVec::truncate( unsigned new_width ) const
{
  if ( new_width == 0u || new_width > width_ )
  {
    throw contract_error( "truncate cannot widen" );
  }
  return BitVec( new_width, value_ & mask( new_width ) );
}

std::string BitVec::to_hex() const
{
  char buf[32];
  std::snprintf( buf, sizeof( buf ), "0x%llX", static_cast<unsigned long long>( value_ ) );
  return buf;
}

BitVec add( const BitVec& a, const BitVec& b, unsigned width )
{
  if ( a.width() != width || b.width() != width )
  {
    throw contract_error( "add: operand widths must both equal " + std::to_string( width ) );
  }
  if ( width + 1u > BitVec::max_width )
  {
    throw contract_error( "add: result would exceed 64 bits" );
  }

  std::uint64_t sum = 0u;
  bool carry = false;
  for ( unsigned i = 0u; i < width; ++i )
  {
    const auto r = full_add( ( a.value() >> i ) & 1u, ( b.value() >> i ) & 1u, carry );
    sum |= std::uint64_t{ r.sum } << i;
    carry = r.carry;
  }
  sum |= std::uint64_t{ carry } << width;
  return BitVec( width + 1u, sum );
}

unsigned classify_width( const BitVec& x, std::span<const unsigned> classes )
{
  if ( classes.empty() )
  {
    throw contract_error( "classify_width: empty class list" );
  }
  if ( !std::is_sorted( classes.begin(), classes.end() ) || classes.front() == 0u )
  {
    throw contract_error( "classify_width: classes must be positive and ascending" );
  }
  for ( const auto c : classes )
  {
    if ( c >= 64u || x.value() < ( std::uint64_t{ 1 } << c ) )
    {
      return c;
    }
  }
  throw std::out_of_range( "classify_width: value " + x.to_hex() + " exceeds the widest class" );
}

} // namespace cifm
