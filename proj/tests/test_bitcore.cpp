#include "cifm/bitcore.hpp"

#include "oracle/bits.hpp"

#include <doctest.h>

using namespace cifm;

TEST_CASE( "half adder truth table" )
{
  CHECK( half_add( false, false ) == BitPair{ false, false } );
  CHECK( half_add( true, true ) == BitPair{ false, true } );
  CHECK( half_add( true, false ) == BitPair{ true, false } );
  CHECK( half_add( false, true ) == BitPair{ true, false } );
}

TEST_CASE( "full adder matches integer addition of three bits" )
{
  CHECK( full_add( true, true, true ) == BitPair{ true, true } );
  CHECK( full_add( true, false, false ) == BitPair{ true, false } );
  CHECK( full_add( false, true, true ) == BitPair{ false, true } );
  for ( int x = 0; x < 8; ++x )
  {
    const bool a = x & 1, b = x & 2, c = x & 4;
    const int total = a + b + c;
    const auto r = full_add( a, b, c );
    CHECK( r.sum == bool( total & 1 ) );
    CHECK( r.carry == bool( total & 2 ) );
  }
}

TEST_CASE( "BitVec construction and slicing" )
{
  CHECK_THROWS_AS( BitVec( 4u, 0x10u ), contract_error );
  CHECK_THROWS_AS( BitVec( 65u, 0u ), contract_error );

  const BitVec v( 12u, 0xABCu );
  CHECK( v.slice( 0u, 4u ) == BitVec( 4u, 0xCu ) );
  CHECK( v.slice( 8u, 4u ) == BitVec( 4u, 0xAu ) );
  CHECK( v.bit( 2u ) );
  CHECK_FALSE( v.bit( 0u ) );
  CHECK_THROWS( v.bit( 12u ) );
  CHECK_THROWS( v.slice( 10u, 4u ) );
  CHECK( v.zero_extend( 24u ) == BitVec( 24u, 0xABCu ) );
  CHECK( v.truncate( 8u ) == BitVec( 8u, 0xBCu ) );
  CHECK( v.to_hex() == "0xABC" );
  CHECK( BitVec( 64u, ~std::uint64_t{ 0 } ).value() == ~std::uint64_t{ 0 } );
}

TEST_CASE( "ripple add" )
{
  CHECK( add( BitVec( 4u, 0xFu ), BitVec( 4u, 0x1u ), 4u ) == BitVec( 5u, 0x10u ) );
  CHECK( add( BitVec( 4u, 0u ), BitVec( 4u, 0u ), 4u ) == BitVec( 5u, 0u ) );
  CHECK( add( BitVec( 12u, 0xABCu ), BitVec( 12u, 0x544u ), 12u ) == BitVec( 13u, 0x1000u ) );
  CHECK_THROWS_AS( add( BitVec( 4u, 1u ), BitVec( 8u, 1u ), 4u ), contract_error );
  CHECK_THROWS_AS( add( BitVec( 8u, 1u ), BitVec( 8u, 1u ), 4u ), contract_error );
}

TEST_CASE( "ripple add agrees with native addition" )
{
  std::mt19937_64 rng( 1 );
  for ( int k = 0; k < 5000; ++k )
  {
    const unsigned w = 1u + static_cast<unsigned>( rng() % 48u );
    const auto m = BitVec::mask( w );
    const auto a = rng() & m, b = rng() & m;
    const auto s = add( BitVec( w, a ), BitVec( w, b ), w );
    REQUIRE( s.width() == w + 1u );
    REQUIRE( s.value() == a + b );
  }
}

TEST_CASE( "width classification" )
{
  CHECK( classify_width( BitVec( 12u, 9u ), { 4u, 8u, 12u } ) == 4u );
  CHECK( classify_width( BitVec( 12u, 0x0FFu ), { 4u, 8u, 12u } ) == 8u );
  CHECK( classify_width( BitVec( 12u, 0xFFFu ), { 4u, 8u, 12u } ) == 12u );
  CHECK( classify_width( BitVec( 12u, 0u ), { 4u, 8u, 12u } ) == 4u );
  CHECK( classify_width( BitVec( 24u, 0x1000u ), { 12u, 24u } ) == 24u );
  CHECK_THROWS_AS( classify_width( BitVec( 16u, 0x1000u ), { 4u, 8u, 12u } ), std::out_of_range );
}

TEST_CASE( "classification is monotone and minimal" )
{
  unsigned previous = 0u;
  for ( std::uint64_t x = 0u; x < 4096u; ++x )
  {
    const auto c = classify_width( BitVec( 12u, x ), { 4u, 8u, 12u } );
    REQUIRE( c >= previous );
    REQUIRE( x < ( std::uint64_t{ 1 } << c ) );
    if ( c > 4u )
    {
      REQUIRE( x >= ( std::uint64_t{ 1 } << ( c - 4u ) ) );
    }
    previous = c;
  }
}
