#include <cstdio>
#include <iostream>

#include "commands.hpp"
#include "kg/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon kernels, transforms, simulation and bubble analysis"};
  app.require_subcommand(1);
  kgcli::Output output;
  std::function<int()> run;
  kgcli::register_commands(app, output, run);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 64;
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  output.set_command(args.empty() ? "" : args.front(), args);
  try {
    const int code = run ? run() : 64;
    output.finish();
    return code;
  } catch (const kg::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const kg::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const kg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
