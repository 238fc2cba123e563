#ifndef CMFD_CONFIG_HPP
#define CMFD_CONFIG_HPP

#include <string>

#include "cmfd/kv.hpp"
#include "cmfd/matcher.hpp"
#include "cmfd/olbm.hpp"

namespace cmfd {

enum class Method { iidmjpeg, olbm };

inline const char* to_string(Method m) { return m == Method::iidmjpeg ? "iidmjpeg" : "olbm"; }

inline Method parse_method(const std::string& s) {
    if (s == "iidmjpeg") return Method::iidmjpeg;
    if (s == "olbm") return Method::olbm;
    throw InvalidArgument("unknown method '" + s + "'");
}

inline DetectionResult run_detector(Method m, const RgbImage& img, const DetectorConfig& cfg) {
    return m == Method::iidmjpeg ? detect(img, cfg) : olbm_detect(img, cfg);
}

/// Thread count is a runtime knob and is not serialized.
inline KeyValueDoc to_kv(const DetectorConfig& cfg) {
    KeyValueDoc doc;
    doc.set("block_size", cfg.block_size);
    doc.set("s12", cfg.s12);
    doc.set("s34", cfg.s34);
    doc.set("window", cfg.window);
    doc.set("th1", cfg.th1);
    doc.set("th1_metric", std::string(to_string(cfg.th1_metric)));
    doc.set("th2", cfg.th2);
    doc.set("se_size", cfg.se_size);
    return doc;
}

/// Missing keys keep their defaults.
inline DetectorConfig config_from_kv(const KeyValueDoc& doc) {
    DetectorConfig cfg;
    cfg.block_size = doc.get_or("block_size", cfg.block_size);
    cfg.s12 = doc.get_or("s12", cfg.s12);
    cfg.s34 = doc.get_or("s34", cfg.s34);
    cfg.window = doc.get_or("window", cfg.window);
    cfg.th1 = doc.get_or("th1", cfg.th1);
    if (doc.has("th1_metric")) cfg.th1_metric = parse_shift_metric(doc.get("th1_metric"));
    cfg.th2 = doc.get_or("th2", cfg.th2);
    cfg.se_size = doc.get_or("se_size", cfg.se_size);
    cfg.validate();
    return cfg;
}

}  // namespace cmfd

#endif  // CMFD_CONFIG_HPP
