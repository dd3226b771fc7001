#ifndef RELBOUND_CORPUS_HPP
#define RELBOUND_CORPUS_HPP

#include <string>
#include <vector>

#include <relbound/parser.hpp>

namespace relbound
{

struct BenchmarkRecord {
    std::string name;
    std::string source;
    std::string provenance;
};

// Bundled benchmarks: the cubic B-spline basis on [0, 1].
const std::vector<BenchmarkRecord> &bundled_corpus();
FunctionSpec corpus_spec(const std::string &name);

} // namespace relbound

#endif
