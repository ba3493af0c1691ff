#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qecsense::cli {

// Exit status: 0 success, 1 usage/schema/I-O failure, 2 model-level error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// min(jobs, hardware threads, QECSENSE_THREADS when set to a positive integer)
std::size_t worker_count(std::size_t jobs);

}  // namespace qecsense::cli
