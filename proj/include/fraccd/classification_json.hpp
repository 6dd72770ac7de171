#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "fraccd/stationarity.hpp"

namespace fraccd {

// JSON report {point, flags, witnesses, residuals} for a classified point.
// Flags are true/false/null, null meaning the condition was not evaluable.
inline std::string classification_report_json(std::span<const double> point,
                                              const PointClassification& cls,
                                              const ResidualReport* residuals = nullptr,
                                              int indent = 2) {
    using json = nlohmann::json;
    const auto flag = [](const std::optional<bool>& b) {
        return b.has_value() ? json(*b) : json(nullptr);
    };
    json j;
    j["point"] = std::vector<double>(point.begin(), point.end());
    j["flags"] = {{"c", flag(cls.is_c)},
                  {"d", flag(cls.is_d)},
                  {"fcw", flag(cls.is_fcw)},
                  {"pcw", flag(cls.is_pcw)}};
    json w = json::object();
    if (cls.is_c.has_value() && !*cls.is_c) w["c_coordinate"] = cls.c_witness;
    if (cls.is_d.has_value() && !*cls.is_d) w["d_direction"] = cls.d_witness;
    if (cls.is_fcw.has_value() && !*cls.is_fcw)
        w["fcw"] = {{"coordinate", cls.fcw_witness}, {"eta", cls.fcw_eta}};
    if (cls.is_pcw.has_value() && !*cls.is_pcw)
        w["pcw"] = {{"coordinate", cls.pcw_witness}, {"eta", cls.pcw_eta}};
    j["witnesses"] = w;
    if (residuals) {
        json r;
        r["r"] = residuals->r;
        r["per_coord"] = residuals->per_coord;
        r["eps_pcw"] = residuals->eps_pcw;
        r["eps_fcw"] = residuals->eps_fcw.has_value() ? json(*residuals->eps_fcw) : json(nullptr);
        j["residuals"] = r;
    }
    return j.dump(indent);
}

}  // namespace fraccd
