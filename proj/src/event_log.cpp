#include "hmon/event_log.hpp"

#include <sstream>

namespace hmon {

EventLog::Record& EventLog::append(std::uint64_t epoch, const std::string& subsystem,
                                   const std::string& type) {
    Record rec;
    rec["epoch"] = epoch;
    rec["subsystem"] = subsystem;
    rec["type"] = type;
    records_.push_back(std::move(rec));
    return records_.back();
}

std::string EventLog::to_jsonl() const {
    std::ostringstream out;
    for (const auto& rec : records_) {
        out << rec.dump() << '\n';
    }
    return out.str();
}

std::vector<EventLog::Record> EventLog::parse_jsonl(const std::string& text) {
    std::vector<Record> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(Record::parse(line));
    }
    return out;
}

} // namespace hmon
