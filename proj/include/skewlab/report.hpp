#ifndef SKEWLAB_REPORT_HPP
#define SKEWLAB_REPORT_HPP

#include <string>
#include <vector>

namespace skewlab {

// One verification check: status is PASS, FAIL, INCONCLUSIVE or ERROR.
struct CheckRecord {
    std::string name;
    std::string status;
    std::string detail;
};

struct CheckList {
    std::vector<CheckRecord> records;

    void add(std::string name, std::string status, std::string detail = "") {
        records.push_back({std::move(name), std::move(status), std::move(detail)});
    }
    int64_t count(const std::string& status) const {
        int64_t n = 0;
        for (const auto& r : records)
            if (r.status == status) ++n;
        return n;
    }
    bool all_pass() const { return count("PASS") == static_cast<int64_t>(records.size()); }
    bool no_failures() const { return count("FAIL") == 0 && count("ERROR") == 0; }
};

}  // namespace skewlab

#endif
