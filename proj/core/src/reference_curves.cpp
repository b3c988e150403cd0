#include "eqnet/reference_curves.hpp"

#include <fstream>
#include <sstream>

#include "eqnet/digest.hpp"
#include "eqnet/errors.hpp"

namespace eqnet {

const char* ReferenceCurves::expected_sha1() {
    return "03540204235888bf2307ffa402c52dd5841fd9a6";
}

ReferenceCurves ReferenceCurves::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open reference curve file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    if (sha1_hex(text) != expected_sha1())
        throw IoError("reference curve file checksum mismatch: " + path);

    ReferenceCurves rc;
    std::stringstream ss(text);
    std::string line;
    ReferenceCurve* current = nullptr;
    while (std::getline(ss, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::stringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "curve") {
            ReferenceCurve c;
            if (!(ls >> c.figure >> c.name >> c.convention))
                throw IoError("malformed curve header in " + path);
            current = &rc.curves_.emplace(c.figure + "/" + c.name, std::move(c)).first->second;
        } else {
            if (!current) throw IoError("data row before curve header in " + path);
            double snr = std::stod(first);
            double ber;
            if (!(ls >> ber)) throw IoError("malformed data row in " + path);
            current->snr_db.push_back(snr);
            current->ber.push_back(ber);
        }
    }
    return rc;
}

const ReferenceCurve& ReferenceCurves::curve(const std::string& figure,
                                             const std::string& name) const {
    auto it = curves_.find(figure + "/" + name);
    if (it == curves_.end()) throw IoError("unknown reference curve: " + figure + "/" + name);
    return it->second;
}

bool ReferenceCurves::has(const std::string& figure, const std::string& name) const {
    return curves_.count(figure + "/" + name) != 0;
}

std::vector<const ReferenceCurve*> ReferenceCurves::figure_curves(const std::string& figure) const {
    std::vector<const ReferenceCurve*> out;
    for (const auto& [key, c] : curves_)
        if (c.figure == figure) out.push_back(&c);
    return out;
}

}  // namespace eqnet
