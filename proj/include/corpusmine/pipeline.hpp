#ifndef CORPUSMINE_PIPELINE_HPP
#define CORPUSMINE_PIPELINE_HPP

#include <string>
#include <vector>

#include "corpusmine/config.hpp"

namespace corpusmine {

// Stage entry points used by the CLI; each reads/writes only the
// documented file formats under config.output_dir and returns the paths
// it produced.  Failures throw; the CLI turns them into exit codes and
// renames incomplete artifacts to `.partial`.
std::vector<std::string> run_harvest(const PipelineConfig& cfg);
std::vector<std::string> run_train_classifier(const PipelineConfig& cfg);
std::vector<std::string> run_mine(const PipelineConfig& cfg);
std::vector<std::string> run_analogy(const PipelineConfig& cfg);
std::vector<std::string> run_filter(const PipelineConfig& cfg);
std::vector<std::string> run_eval(const PipelineConfig& cfg);
std::vector<std::string> run_pipeline(const PipelineConfig& cfg);

// Writes <output_dir>/manifest.txt: config hash, seeds, input hashes.
void write_run_manifest(const PipelineConfig& cfg, const std::string& stage);

// Full CLI (subcommand dispatch, flag overrides).  Returns the process
// exit status; used by both tools/corpusmine.cpp and the tests.
int cli_main(int argc, const char* const* argv);

}  // namespace corpusmine

#endif
