#include "corpusmine/pipeline.hpp"

int main(int argc, char** argv) { return corpusmine::cli_main(argc, argv); }
