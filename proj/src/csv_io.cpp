#include "admfreq/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "admfreq/error.hpp"
#include "admfreq/format.hpp"
#include "admfreq/keyvalue.hpp"

namespace admfreq {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

void expect_header(const CsvTable& table, const std::vector<std::string>& want, const std::string& source) {
    if (table.header != want) {
        std::string w;
        for (const auto& h : want) w += (w.empty() ? "" : ",") + h;
        throw InputError(source + ": expected header '" + w + "'");
    }
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw InputError("missing CSV column '" + name + "'");
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
    CsvTable table;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = trim(raw);
        if (s.empty() || s.front() == '#') continue;
        auto fields = split(s);
        if (!have_header) {
            for (auto f : fields) table.header.emplace_back(f);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw InputError(source, line, "expected " + std::to_string(table.header.size()) + " fields, got " +
                                                std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            try {
                row.push_back(parse_double(f));
            } catch (const InputError& e) {
                throw InputError(source, line, e.what());
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw InputError(source + ": missing CSV header");
    return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_text_file(path), path); }

std::string format_csv(const CsvTable& table, const std::vector<std::string>& metadata) {
    std::string out;
    for (const auto& m : metadata) out += "# " + m + "\n";
    for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const CsvTable& table, const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << format_csv(table, metadata);
    if (!out) throw InputError("write failed for " + path);
}

CsvTable samples_table(const SampleStream& stream) {
    CsvTable t{{"t", "value"}, {}};
    t.rows.reserve(stream.size());
    for (std::size_t k = 0; k < stream.size(); ++k) t.rows.push_back({stream.time(k), stream.values[k]});
    return t;
}

SampleStream samples_from_table(const CsvTable& table, const std::string& source) {
    expect_header(table, {"t", "value"}, source);
    SampleStream s;
    if (table.rows.empty()) return s;
    s.t0 = table.rows.front()[0];
    if (table.rows.size() >= 2) {
        s.ts = (table.rows.back()[0] - s.t0) / static_cast<double>(table.rows.size() - 1);
        if (!(s.ts > 0.0)) throw InputError(source + ": timestamps must increase");
        for (std::size_t k = 0; k < table.rows.size(); ++k) {
            const double expect = s.t0 + static_cast<double>(k) * s.ts;
            if (std::abs(table.rows[k][0] - expect) > 1e-6 * s.ts)
                throw InputError(source, k + 2, "sample timestamps are not uniformly spaced");
        }
    }
    s.values.reserve(table.rows.size());
    for (const auto& r : table.rows) s.values.push_back(r[1]);
    return s;
}

void write_samples(const std::string& path, const SampleStream& stream) { write_csv(path, samples_table(stream)); }

SampleStream read_samples(const std::string& path) { return samples_from_table(read_csv(path), path); }

CsvTable truth_table(const GroundTruth& truth) {
    CsvTable t{{"t", "freq_hz", "rocof_hzps", "amp_pu", "phase_rad"}, {}};
    t.rows.reserve(truth.size());
    for (std::size_t k = 0; k < truth.size(); ++k)
        t.rows.push_back({truth.t[k], truth.freq_hz[k], truth.rocof_hzps[k], truth.amp_pu[k], truth.phase_rad[k]});
    return t;
}

GroundTruth truth_from_table(const CsvTable& table, const std::string& source) {
    expect_header(table, {"t", "freq_hz", "rocof_hzps", "amp_pu", "phase_rad"}, source);
    GroundTruth g;
    for (const auto& r : table.rows) {
        g.t.push_back(r[0]);
        g.freq_hz.push_back(r[1]);
        g.rocof_hzps.push_back(r[2]);
        g.amp_pu.push_back(r[3]);
        g.phase_rad.push_back(r[4]);
    }
    for (std::size_t k = 1; k < g.t.size(); ++k)
        if (!(g.t[k] > g.t[k - 1])) throw InputError(source, k + 2, "truth timestamps must increase");
    return g;
}

void write_truth(const std::string& path, const GroundTruth& truth) { write_csv(path, truth_table(truth)); }

GroundTruth read_truth(const std::string& path) { return truth_from_table(read_csv(path), path); }

void write_phasors(const std::string& path, const std::vector<PhasorFrame>& frames) {
    CsvTable t{{"t", "amp_pu", "freq_hz", "rocof_hzps", "phase_rad"}, {}};
    for (const auto& f : frames) t.rows.push_back({f.t, f.amp_pu, f.freq_hz, f.rocof_hzps, f.phase_rad});
    write_csv(path, t);
}

std::vector<PhasorFrame> read_phasors(const std::string& path) {
    auto table = read_csv(path);
    expect_header(table, {"t", "amp_pu", "freq_hz", "rocof_hzps", "phase_rad"}, path);
    std::vector<PhasorFrame> out;
    for (const auto& r : table.rows) out.push_back({r[0], r[1], r[2], r[3], r[4]});
    return out;
}

CsvTable estimates_table(const EstimateSeries& series) {
    CsvTable t{{"t", "f_hz", "rocof_hzps", "residual", "a_dc", "a_dc1"}, {}};
    for (int i = 1; i <= series.n; ++i) {
        t.header.push_back("amp_" + std::to_string(i));
        t.header.push_back("phase_" + std::to_string(i));
    }
    t.rows.reserve(series.records.size());
    for (const auto& r : series.records) {
        std::vector<double> row{r.t, r.f_hz, r.rocof_hzps, r.residual, r.a_dc, r.a_dc1};
        for (std::size_t i = 0; i < r.amps.size(); ++i) {
            row.push_back(r.amps[i]);
            row.push_back(r.phases[i]);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

EstimateSeries estimates_from_table(const CsvTable& table, const std::string& source) {
    const std::vector<std::string> fixed{"t", "f_hz", "rocof_hzps", "residual", "a_dc", "a_dc1"};
    if (table.header.size() < fixed.size() + 2 || (table.header.size() - fixed.size()) % 2 != 0 ||
        !std::equal(fixed.begin(), fixed.end(), table.header.begin()))
        throw InputError(source + ": not an estimate CSV");
    EstimateSeries s;
    s.n = static_cast<int>((table.header.size() - fixed.size()) / 2);
    for (int i = 1; i <= s.n; ++i) {
        const auto base = fixed.size() + 2 * static_cast<std::size_t>(i - 1);
        if (table.header[base] != "amp_" + std::to_string(i) || table.header[base + 1] != "phase_" + std::to_string(i))
            throw InputError(source + ": unexpected harmonic columns");
    }
    for (const auto& row : table.rows) {
        EstimateRecord r;
        r.t = row[0];
        r.f_hz = row[1];
        r.rocof_hzps = row[2];
        r.residual = row[3];
        r.a_dc = row[4];
        r.a_dc1 = row[5];
        for (std::size_t i = fixed.size(); i < row.size(); i += 2) {
            r.amps.push_back(row[i]);
            r.phases.push_back(row[i + 1]);
        }
        s.records.push_back(std::move(r));
    }
    if (s.records.size() >= 2) s.report_interval_s = s.records[1].t - s.records[0].t;
    return s;
}

void write_estimates(const std::string& path, const EstimateSeries& series) {
    write_csv(path, estimates_table(series));
}

EstimateSeries read_estimates(const std::string& path) { return estimates_from_table(read_csv(path), path); }

}  // namespace admfreq
