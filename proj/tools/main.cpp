#include "cifm/cli.hpp"

#include <iostream>

int main( int argc, char** argv )
{
  return cifm::cli::run( std::vector<std::string>( argv, argv + argc ), std::cout, std::cerr );
}
