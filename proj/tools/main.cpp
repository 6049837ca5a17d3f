#include <iostream>
#include <string>
#include <vector>

#include "lukabd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool pretty = false;
  for (const auto& a : args)
    if (a == "--pretty") pretty = true;
  lukabd::CommandResult r = lukabd::run_command(args);
  if (pretty)
    std::cout << r.doc.dump(2) << "\n";
  else
    std::cout << r.doc.dump() << "\n";
  return r.exit_code;
}
