// Prints the frozen Maclaurin table compiled into the library. The output
// replaces src/series_tables.inc; the test suite rejects any drift.
#include <cstdio>

#include "gravidec/series.hpp"

int main() {
    using namespace gravidec;
    std::printf("// Generated by gravidec_series_tables from the exact Maclaurin oracle. Do not edit.\n");
    std::printf("inline constexpr std::array<std::array<double, %d>, %zu> kFrozenSeries{{\n", kMaxSeriesOrder + 1,
                kAllSeries.size());
    for (const SeriesId id : kAllSeries) {
        const auto c = maclaurin_defining_integral(id, kMaxSeriesOrder);
        std::printf("    // %.*s\n    {{", static_cast<int>(series_name(id).size()), series_name(id).data());
        for (std::size_t k = 0; k < c.size(); ++k) {
            std::printf("%s%s%.17g", k == 0 ? "" : ",", k % 4 == 0 ? "\n        " : " ", c[k]);
        }
        std::printf("}},\n");
    }
    std::printf("}};\n");
    return 0;
}
