#include "eqnet/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "eqnet/errors.hpp"

namespace eqnet {

namespace {

// Shortest decimal representation that round-trips to the same double.
std::string encode_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double decode_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw IoError("checkpoint: bad numeric value '" + s + "'");
    return v;
}

std::string shape_string(const Tensor& t) {
    std::string out;
    for (std::size_t i = 0; i < t.rank(); ++i) {
        if (i) out += ',';
        out += std::to_string(t.shape()[i]);
    }
    return out;
}

std::vector<std::size_t> parse_shape(const std::string& s) {
    std::vector<std::size_t> shape;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) shape.push_back(std::stoul(item));
    return shape;
}

std::string param_name(const Network& net, std::size_t layer, std::size_t slot) {
    const char* what = slot == 0 ? "weight" : "bias";
    return net.layer(layer).kind() + std::to_string(layer) + "." + what;
}

}  // namespace

void save_checkpoint(const Network& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);

    out << "eqnet-checkpoint " << kCheckpointVersion << ' ' << net.kind() << ' ';
    const auto& st = net.structure();
    for (std::size_t i = 0; i < st.size(); ++i) out << (i ? "," : "") << st[i];
    out << ' ' << net.kernel_size() << '\n';

    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        auto params = net.layer(l).params();
        for (std::size_t s = 0; s < params.size(); ++s) {
            const Tensor& t = *params[s];
            out << param_name(net, l, s) << ' ' << shape_string(t);
            for (std::size_t i = 0; i < t.size(); ++i) out << ' ' << encode_double(t[i]);
            out << '\n';
        }
    }
    if (!out) throw IoError("checkpoint write failed: " + path);
}

CheckpointHeader read_checkpoint_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    std::string magic, kind, structure;
    CheckpointHeader h{};
    in >> magic >> h.version >> kind >> structure >> h.kernel_size;
    if (!in || magic != "eqnet-checkpoint") throw IoError("not an eqnet checkpoint: " + path);
    if (h.version != kCheckpointVersion)
        throw IoError("unsupported checkpoint version in " + path);
    h.kind = kind;
    std::stringstream ss(structure);
    std::string item;
    while (std::getline(ss, item, ',')) h.structure.push_back(std::stoi(item));
    return h;
}

void load_checkpoint_into(Network& net, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    std::string header;
    std::getline(in, header);

    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        auto params = net.layer(l).params();
        for (std::size_t s = 0; s < params.size(); ++s) {
            Tensor& t = *params[s];
            std::string name, shape;
            if (!(in >> name >> shape)) throw IoError("checkpoint truncated: " + path);
            if (name != param_name(net, l, s))
                throw IoError("checkpoint parameter order mismatch at " + name);
            if (parse_shape(shape) != t.shape())
                throw IoError("checkpoint shape mismatch at " + name);
            std::string tok;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (!(in >> tok)) throw IoError("checkpoint truncated: " + path);
                t[i] = decode_double(tok);
            }
        }
    }
}

}  // namespace eqnet
