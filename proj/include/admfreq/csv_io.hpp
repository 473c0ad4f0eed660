#pragma once

#include <string>
#include <vector>

#include "admfreq/estimator.hpp"
#include "admfreq/signal.hpp"

namespace admfreq {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

// Lines starting with '#' are metadata and skipped.
CsvTable parse_csv(const std::string& text, const std::string& source);
CsvTable read_csv(const std::string& path);
std::string format_csv(const CsvTable& table, const std::vector<std::string>& metadata = {});
void write_csv(const std::string& path, const CsvTable& table, const std::vector<std::string>& metadata = {});

CsvTable samples_table(const SampleStream& stream);
SampleStream samples_from_table(const CsvTable& table, const std::string& source);
void write_samples(const std::string& path, const SampleStream& stream);
SampleStream read_samples(const std::string& path);

CsvTable truth_table(const GroundTruth& truth);
GroundTruth truth_from_table(const CsvTable& table, const std::string& source);
void write_truth(const std::string& path, const GroundTruth& truth);
GroundTruth read_truth(const std::string& path);

void write_phasors(const std::string& path, const std::vector<PhasorFrame>& frames);
std::vector<PhasorFrame> read_phasors(const std::string& path);

CsvTable estimates_table(const EstimateSeries& series);
EstimateSeries estimates_from_table(const CsvTable& table, const std::string& source);
void write_estimates(const std::string& path, const EstimateSeries& series);
EstimateSeries read_estimates(const std::string& path);

}  // namespace admfreq
