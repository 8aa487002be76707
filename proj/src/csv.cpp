#include "ebmc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ebmc {

namespace {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& content, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing: " + path.string());
}

}  // namespace

std::string records_to_csv(std::span<const MetricsRecord> records) {
    std::string out = "run,episode,train_return,train_steps,test_metric,epsilon\n";
    for (const auto& r : records) {
        out += std::to_string(r.run);
        out += ',';
        out += std::to_string(r.episode);
        out += ',';
        out += format_real(r.train_return);
        out += ',';
        out += std::to_string(r.train_steps);
        out += ',';
        out += format_real(r.test_metric);
        out += ',';
        out += format_real(r.epsilon);
        out += '\n';
    }
    return out;
}

std::string curve_to_csv(const AggregateCurve& curve) {
    std::string out = "episode,mean,stderr,n\n";
    for (std::size_t ep = 0; ep < curve.size(); ++ep) {
        out += std::to_string(ep);
        out += ',';
        out += format_real(curve.mean[ep]);
        out += ',';
        out += format_real(curve.std_error[ep]);
        out += ',';
        out += std::to_string(curve.count[ep]);
        out += '\n';
    }
    return out;
}

void write_records_csv(std::span<const MetricsRecord> records,
                       const std::filesystem::path& path) {
    write_file(records_to_csv(records), path);
}

void write_curve_csv(const AggregateCurve& curve, const std::filesystem::path& path) {
    write_file(curve_to_csv(curve), path);
}

}  // namespace ebmc
