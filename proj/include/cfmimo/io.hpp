#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/experiment.hpp"
#include "cfmimo/stats.hpp"

namespace cfmimo {

/// %.9g formatting used for every numeric CSV field.
std::string format_number(double v);

/// Reads `instance,ap,ue,re,im,valid` rows; dimensions are inferred from the
/// largest indices and missing rows stay invalid. Throws IngestError.
MeasurementTensor read_measurement_csv(std::istream& in);
MeasurementTensor read_measurement_csv(const std::string& path);

/// M rows x K columns, no header.
void write_beta_csv(std::ostream& out, const RMatrix& beta);

void write_records_csv(std::ostream& out, const std::vector<MetricRecord>& records);
void write_cdf_csv(std::ostream& out, const CdfSeries& cdf);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace cfmimo
