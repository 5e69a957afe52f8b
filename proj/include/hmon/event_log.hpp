#ifndef HMON_EVENT_LOG_HPP
#define HMON_EVENT_LOG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hmon {

// Line-delimited structured records, one JSON object per event. Field
// order is fixed (epoch, subsystem, type, then payload fields) and the
// log for a given (config, seed) is byte-identical across runs; tests
// treat the format as a stable interface.
class EventLog {
public:
    using Record = nlohmann::ordered_json;

    Record& append(std::uint64_t epoch, const std::string& subsystem, const std::string& type);

    const std::vector<Record>& records() const { return records_; }

    std::string to_jsonl() const;

    static std::vector<Record> parse_jsonl(const std::string& text);

private:
    std::vector<Record> records_;
};

} // namespace hmon

#endif
