#include "cli_app.hpp"

int main(int argc, char** argv) { return statage::cli::run(std::vector<std::string>(argv, argv + argc)); }
