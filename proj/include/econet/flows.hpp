#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "econet/errors.hpp"
#include "econet/scheme.hpp"
#include "econet/text.hpp"

namespace econet {

enum class BuyerKind { industry, final_use };

struct RawFlowRecord {
    int year = 0;
    std::string supplier_region;
    std::string supplier_industry;
    std::string buyer_region;
    BuyerKind buyer_kind = BuyerKind::industry;
    std::string buyer_industry;  // empty on final-use rows
    double value = 0.0;
};

inline constexpr std::string_view kFlowsHeader =
    "year,supplier_region,supplier_industry,buyer_region,buyer_kind,buyer_industry,value";

// Streaming row reader for the canonical flows CSV. Region codes pass through
// untouched (aggregation happens at table-build time, and final-use consumer
// regions are free-form); industry codes must come from the scheme.
class FlowReader {
public:
    FlowReader(std::istream& in, const RegionScheme& scheme) : in_(in), scheme_(scheme) {
        if (!std::getline(in_, buf_)) throw parse_error("empty flows stream", 1);
        ++line_;
        if (trim(buf_) != kFlowsHeader)
            throw parse_error("bad flows header, expected '" + std::string(kFlowsHeader) + "'", 1);
    }

    // Fills `out` with the next record; returns false at end of stream.
    bool next(RawFlowRecord& out) {
        while (std::getline(in_, buf_)) {
            ++line_;
            std::string_view line = buf_;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (trim(line).empty()) continue;

            auto fields = split(line, ',');
            if (fields.size() != 7)
                throw parse_error("expected 7 columns, got " + std::to_string(fields.size()),
                                  line_);
            if (!parse_int(fields[0], out.year))
                throw parse_error("bad year '" + std::string(fields[0]) + "'", line_);

            out.supplier_region = trim(fields[1]);
            out.supplier_industry = trim(fields[2]);
            out.buyer_region = trim(fields[3]);
            std::string_view kind = trim(fields[4]);
            std::string_view buyer_industry = trim(fields[5]);

            if (out.supplier_region.empty() || out.supplier_industry.empty() ||
                out.buyer_region.empty())
                throw parse_error("empty code field", line_);

            if (kind == "IND") {
                out.buyer_kind = BuyerKind::industry;
                if (buyer_industry.empty())
                    throw schema_error("line " + std::to_string(line_) +
                                       ": IND row with empty buyer_industry");
            } else if (kind == "FIN") {
                out.buyer_kind = BuyerKind::final_use;
                if (!buyer_industry.empty())
                    throw schema_error("line " + std::to_string(line_) +
                                       ": FIN row with nonempty buyer_industry");
            } else {
                throw parse_error("buyer_kind must be IND or FIN, got '" + std::string(kind) + "'",
                                  line_);
            }
            out.buyer_industry = buyer_industry;

            if (scheme_.industry_index(out.supplier_industry) < 0)
                throw schema_error("line " + std::to_string(line_) +
                                   ": unknown industry code '" + out.supplier_industry + "'");
            if (out.buyer_kind == BuyerKind::industry &&
                scheme_.industry_index(out.buyer_industry) < 0)
                throw schema_error("line " + std::to_string(line_) +
                                   ": unknown industry code '" + out.buyer_industry + "'");

            if (!parse_double(fields[6], out.value))
                throw parse_error("bad value '" + std::string(fields[6]) + "'", line_);
            return true;
        }
        return false;
    }

    long line() const { return line_; }

private:
    std::istream& in_;
    const RegionScheme& scheme_;
    std::string buf_;
    long line_ = 0;
};

inline std::vector<RawFlowRecord> parse_flows(std::istream& in, const RegionScheme& scheme) {
    FlowReader reader(in, scheme);
    std::vector<RawFlowRecord> records;
    RawFlowRecord rec;
    while (reader.next(rec)) records.push_back(rec);
    return records;
}

}  // namespace econet
