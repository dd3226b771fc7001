#include <relbound/corpus.hpp>
#include <relbound/errors.hpp>

namespace relbound
{

const std::vector<BenchmarkRecord> &bundled_corpus()
{
    static const std::vector<BenchmarkRecord> corpus = {
        {"bspline0",
         "def bspline0(u: Real): Real = {\n"
         "  require(0 <= u && u <= 1)\n"
         "  (1 - u) * (1 - u) * (1 - u) / 6.0\n"
         "}\n",
         "uniform cubic B-spline basis B0; derived, checked against sampling"},
        {"bspline1",
         "def bspline1(u: Real): Real = {\n"
         "  require(0 <= u && u <= 1)\n"
         "  (3 * u * u * u - 6 * u * u + 4) / 6.0\n"
         "}\n",
         "uniform cubic B-spline basis B1; derived, checked against sampling"},
        {"bspline2",
         "def bspline2(u: Real): Real = {\n"
         "  require(0 <= u && u <= 1)\n"
         "  (-3 * u * u * u + 3 * u * u + 3 * u + 1) / 6.0\n"
         "}\n",
         "uniform cubic B-spline basis B2; derived, checked against sampling"},
        {"bspline3",
         "def bspline3(u: Real): Real = {\n"
         "  require(0 <= u && u <= 1)\n"
         "     - u * u * u / 6.0\n"
         "}\n",
         "published input listing, verbatim"},
    };
    return corpus;
}

FunctionSpec corpus_spec(const std::string &name)
{
    for (const auto &r : bundled_corpus()) {
        if (r.name == name) {
            return parse_function(r.source);
        }
    }
    throw Error(ErrorKind::Usage, "unknown bundled benchmark '" + name + "'");
}

} // namespace relbound
