#include "memsnn/encoding.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace memsnn {

double PopulationCoder::center(std::size_t f, std::size_t level) const {
    const double width = (max[f] - min[f]) / static_cast<double>(kCodingLevels);
    return min[f] + (static_cast<double>(level) + 0.5) * width;
}

double PopulationCoder::sigma(std::size_t f) const {
    return (max[f] - min[f]) / static_cast<double>(kCodingLevels);
}

PopulationCoder fit_coder(const std::vector<IrisSample>& dataset, NanoAmps i_max) {
    if (dataset.empty()) throw std::invalid_argument("fit_coder: empty dataset");
    PopulationCoder coder;
    coder.i_max = i_max;
    for (std::size_t f = 0; f < kIrisFeatures; ++f) {
        const auto [lo, hi] = std::minmax_element(
            dataset.begin(), dataset.end(),
            [f](const IrisSample& a, const IrisSample& b) { return a.features[f] < b.features[f]; });
        coder.min[f] = lo->features[f];
        coder.max[f] = hi->features[f];
        if (!(coder.max[f] > coder.min[f])) {
            throw std::invalid_argument("fit_coder: feature " + std::to_string(f) +
                                        " is constant");
        }
    }
    return coder;
}

EncodedSample encode(const IrisSample& sample, const PopulationCoder& coder) {
    EncodedSample out;
    out.label = sample.label;
    for (std::size_t f = 0; f < kIrisFeatures; ++f) {
        const double s = coder.sigma(f);
        for (std::size_t l = 0; l < kCodingLevels; ++l) {
            const double d = sample.features[f] - coder.center(f, l);
            out.input_currents[f * kCodingLevels + l] =
                coder.i_max * std::exp(-d * d / (2.0 * s * s));
        }
    }
    return out;
}

std::vector<EncodedSample> encode_all(const std::vector<IrisSample>& dataset,
                                      const PopulationCoder& coder) {
    std::vector<EncodedSample> out;
    out.reserve(dataset.size());
    for (const auto& s : dataset) out.push_back(encode(s, coder));
    return out;
}

int parse_iris_class(const std::string& token) {
    std::string t = token;
    if (t.rfind("Iris-", 0) == 0) t = t.substr(5);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "setosa" || t == "0") return 0;
    if (t == "versicolor" || t == "1") return 1;
    if (t == "virginica" || t == "2") return 2;
    return -1;
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

std::vector<IrisSample> load_iris(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_iris: cannot open " + path.string());

    std::vector<IrisSample> out;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string field; std::getline(ss, field, ',');) fields.push_back(trim(field));

        double probe = 0.0;
        if (first_content && !fields.empty() && !parse_double(fields[0], probe)) {
            first_content = false;
            continue;  // header
        }
        first_content = false;

        const auto fail = [&](const std::string& why) {
            return std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != kIrisFeatures + 1) throw fail("expected 5 columns");
        IrisSample s;
        for (std::size_t f = 0; f < kIrisFeatures; ++f) {
            if (!parse_double(fields[f], s.features[f])) throw fail("bad number '" + fields[f] + "'");
        }
        s.label = parse_iris_class(fields[kIrisFeatures]);
        if (s.label < 0) throw fail("unknown class '" + fields[kIrisFeatures] + "'");
        out.push_back(s);
    }
    if (out.empty()) throw std::runtime_error("load_iris: no samples in " + path.string());
    if (out.size() != 150) {
        std::cerr << "warning: " << path.string() << " has " << out.size()
                  << " samples (expected 150)\n";
    }
    return out;
}

}  // namespace memsnn
