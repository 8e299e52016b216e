#include "sdde/io.hpp"

#include <cstdio>

namespace sdde {

namespace {

std::string csv_body(const std::string& label, long n, std::uint64_t seed, long path_index, int d,
                     long steps, const double* values) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "# model=%s n=%ld seed=%llu path=%ld\n", label.c_str(), n,
                  static_cast<unsigned long long>(seed), path_index);
    std::string out = buf;
    out += "t";
    for (int c = 1; c <= d; ++c) {
        std::snprintf(buf, sizeof buf, ",X%d", c);
        out += buf;
    }
    out += "\n";
    for (long j = 0; j <= steps; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(j) / static_cast<double>(n));
        out += buf;
        for (int c = 0; c < d; ++c) {
            std::snprintf(buf, sizeof buf, ",%.17g", values[j * d + c]);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace

std::string path_csv(const EulerPath& path) {
    return csv_body(path.model()->label(), path.steps_per_unit(), path.noise().seed(),
                    path.noise().path_index(), path.dim(), path.num_steps(), path.at(0).data());
}

std::string path_csv(const ReferencePath& ref) {
    return csv_body(ref.model->label(), ref.n, ref.seed, ref.path_index, ref.model->dim(),
                    ref.num_steps(), ref.values.data());
}

void write_file(const std::string& file, const std::string& content) {
    std::FILE* f = std::fopen(file.c_str(), "wb");
    if (!f) throw Error("cannot open " + file + " for writing");
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
}

std::string read_file(const std::string& file) {
    std::FILE* f = std::fopen(file.c_str(), "rb");
    if (!f) throw Error("cannot open " + file);
    std::string out;
    char buf[65536];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
    std::fclose(f);
    return out;
}

} // namespace sdde
