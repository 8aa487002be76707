#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ebmc/experiment.hpp"

namespace ebmc {

// CSV schemas. Reals are printed with 17 significant digits so a read-back
// reproduces the exact double values.
//   records.csv: run,episode,train_return,train_steps,test_metric,epsilon
//   curve.csv:   episode,mean,stderr,n

std::string records_to_csv(std::span<const MetricsRecord> records);
std::string curve_to_csv(const AggregateCurve& curve);

void write_records_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);
void write_curve_csv(const AggregateCurve& curve, const std::filesystem::path& path);

}  // namespace ebmc
