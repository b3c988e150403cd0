#pragma once

#include <map>
#include <string>
#include <vector>

namespace eqnet {

// Externally published BER curves, transcribed from plot coordinates and
// shipped as data. They are overlays for comparison and are never
// recomputed here.
struct ReferenceCurve {
    std::string figure;      // e.g. "fig5"
    std::string name;        // e.g. "gpc"
    std::string convention;  // "es_n0" or "eb_n0"
    std::vector<double> snr_db;
    std::vector<double> ber;
};

class ReferenceCurves {
public:
    // Loads and checksums the transcription file; throws IoError on a
    // missing file or digest mismatch.
    static ReferenceCurves load(const std::string& path);

    const ReferenceCurve& curve(const std::string& figure, const std::string& name) const;
    bool has(const std::string& figure, const std::string& name) const;
    std::vector<const ReferenceCurve*> figure_curves(const std::string& figure) const;

    static const char* expected_sha1();

private:
    std::map<std::string, ReferenceCurve> curves_;  // key: figure/name
};

}  // namespace eqnet
