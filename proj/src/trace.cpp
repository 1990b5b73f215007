#include "ffpack/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ffpack {

std::string format_trace_line(const DeltaRecord& delta) {
    char clock[40];
    std::snprintf(clock, sizeof clock, "%.17g", delta.clock);
    std::string line;
    if (delta.kind == Event::Kind::Arrival) {
        line = "ARR " + std::to_string(delta.event_index) + " " + clock + " " +
               item_type_name(delta.type) + " " + std::to_string(delta.placement_start);
    } else {
        line = "DEP " + std::to_string(delta.event_index) + " " + clock + " " +
               std::to_string(delta.item_id);
    }
    return line;
}

DeltaSink make_trace_sink(std::ostream& out) {
    return [&out](const DeltaRecord& delta) { out << format_trace_line(delta) << '\n'; };
}

ReplayReport replay_trace(std::istream& in) {
    ReplayReport report;
    Configuration config;
    std::string line;
    std::size_t line_no = 0;
    bool have_previous = false;
    std::uint64_t previous_index = 0;
    double previous_clock = 0.0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;

        std::istringstream fields(line);
        std::string tag;
        std::uint64_t event_index = 0;
        double clock = 0.0;
        fields >> tag >> event_index >> clock;
        if (!fields || (tag != "ARR" && tag != "DEP")) {
            report.malformed.push_back({line_no, "unparseable record: " + line});
            continue;
        }
        if (have_previous && (event_index <= previous_index || clock < previous_clock)) {
            report.malformed.push_back({line_no, "event order broken at index " +
                                                     std::to_string(event_index)});
            continue;
        }

        if (tag == "ARR") {
            int type_digit = 0;
            std::int64_t recorded_start = 0;
            fields >> type_digit >> recorded_start;
            if (!fields || (type_digit != 1 && type_digit != 2)) {
                report.malformed.push_back({line_no, "unparseable arrival: " + line});
                continue;
            }
            const ItemType type = type_digit == 1 ? ItemType::One : ItemType::Two;
            const auto [id, start] = config.place_first_fit(type);
            (void)id;
            if (start != recorded_start)
                report.mismatches.push_back(
                    {line_no, "arrival placed at " + std::to_string(start) + ", trace says " +
                                  std::to_string(recorded_start)});
            ++report.arrivals;
        } else {
            std::uint64_t item_id = 0;
            fields >> item_id;
            if (!fields) {
                report.malformed.push_back({line_no, "unparseable departure: " + line});
                continue;
            }
            if (config.find_item(item_id) == nullptr) {
                report.malformed.push_back(
                    {line_no, "departure of unknown item " + std::to_string(item_id)});
                continue;
            }
            config.remove_item(item_id);
            ++report.departures;
        }
        ++report.records;
        have_previous = true;
        previous_index = event_index;
        previous_clock = clock;
    }
    return report;
}

ReplayReport replay_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ReplayReport report;
        report.malformed.push_back({0, "cannot open trace file: " + path});
        return report;
    }
    return replay_trace(in);
}

}  // namespace ffpack
