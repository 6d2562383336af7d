#include "uamcap/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace uam {

// The on-disk layout is little-endian; raw f64/u32 writes below assume it.
static_assert(std::endian::native == std::endian::little,
              "checkpoint format requires a little-endian host");

namespace {

constexpr char kMlpMagic[9] = "UAMMLP01";
constexpr char kAgentMagic[9] = "UAMAGT01";
constexpr std::size_t kMagicLen = 8;

void write_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::istream& in, void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
}

void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, 4); }
void write_u64(std::ostream& out, std::uint64_t v) { write_bytes(out, &v, 8); }
void write_f64(std::ostream& out, double v) { write_bytes(out, &v, 8); }

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v;
    read_bytes(in, &v, 4);
    return v;
}
std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v;
    read_bytes(in, &v, 8);
    return v;
}
double read_f64(std::istream& in) {
    double v;
    read_bytes(in, &v, 8);
    return v;
}

void expect_magic(std::istream& in, const char* magic, const char* kind) {
    char got[kMagicLen];
    read_bytes(in, got, kMagicLen);
    if (std::memcmp(got, magic, 6) != 0) {
        throw std::runtime_error(std::string("checkpoint: not a ") + kind + " file");
    }
    if (std::memcmp(got, magic, kMagicLen) != 0) {
        throw std::runtime_error(std::string("checkpoint: unsupported ") + kind + " format version");
    }
}

}  // namespace

void save_mlp(std::ostream& out, const Mlp& net) {
    write_bytes(out, kMlpMagic, kMagicLen);
    write_u32(out, static_cast<std::uint32_t>(net.layer_sizes.size()));
    for (int s : net.layer_sizes) write_u32(out, static_cast<std::uint32_t>(s));
    const std::uint8_t hidden_act = 0;  // rectifier
    const std::uint8_t output_act = net.output_activation == OutputActivation::Linear ? 0 : 1;
    write_bytes(out, &hidden_act, 1);
    write_bytes(out, &output_act, 1);
    write_f64(out, net.output_scale);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        write_bytes(out, net.weights[l].data.data(), net.weights[l].data.size() * 8);
        write_bytes(out, net.biases[l].data(), net.biases[l].size() * 8);
    }
}

Mlp load_mlp(std::istream& in) {
    expect_magic(in, kMlpMagic, "network checkpoint");
    const std::uint32_t n_sizes = read_u32(in);
    if (n_sizes < 2 || n_sizes > 64) {
        throw std::runtime_error("checkpoint: network shape mismatch (bad layer count)");
    }
    Mlp net;
    net.layer_sizes.resize(n_sizes);
    for (auto& s : net.layer_sizes) {
        const std::uint32_t v = read_u32(in);
        if (v == 0 || v > 1'000'000) {
            throw std::runtime_error("checkpoint: network shape mismatch (bad layer width)");
        }
        s = static_cast<int>(v);
    }
    std::uint8_t hidden_act, output_act;
    read_bytes(in, &hidden_act, 1);
    read_bytes(in, &output_act, 1);
    if (hidden_act != 0 || output_act > 1) {
        throw std::runtime_error("checkpoint: unknown activation tag");
    }
    net.output_activation = output_act == 0 ? OutputActivation::Linear : OutputActivation::TanhScaled;
    net.output_scale = read_f64(in);
    for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
        Matrix w(net.layer_sizes[l + 1], net.layer_sizes[l]);
        read_bytes(in, w.data.data(), w.data.size() * 8);
        net.weights.push_back(std::move(w));
        std::vector<double> b(static_cast<std::size_t>(net.layer_sizes[l + 1]));
        read_bytes(in, b.data(), b.size() * 8);
        net.biases.push_back(std::move(b));
    }
    if (!net.finite()) throw std::runtime_error("checkpoint: non-finite network parameters");
    return net;
}

void save_mlp_file(const std::filesystem::path& path, const Mlp& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string() + " for writing");
    save_mlp(out, net);
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

Mlp load_mlp_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
    return load_mlp(in);
}

void save_agent(const std::filesystem::path& path, const Agent& agent) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string() + " for writing");
    write_bytes(out, kAgentMagic, kMagicLen);
    const DdpgHyperparams& h = agent.hyper;
    write_f64(out, h.discount);
    write_f64(out, h.tau);
    write_f64(out, h.lr_critic);
    write_f64(out, h.lr_actor);
    write_u32(out, static_cast<std::uint32_t>(h.batch_size));
    write_f64(out, h.epsilon_start);
    write_f64(out, h.epsilon_end);
    write_f64(out, h.epsilon_fraction);
    write_u64(out, h.learn_start);
    write_u64(out, h.replay_capacity);
    write_u32(out, static_cast<std::uint32_t>(h.hidden_sizes.size()));
    for (int s : h.hidden_sizes) write_u32(out, static_cast<std::uint32_t>(s));
    write_u64(out, agent.buffer.size());
    write_u64(out, agent.buffer.capacity());
    write_u64(out, agent.buffer.total_pushed());
    save_mlp(out, agent.actor);
    save_mlp(out, agent.critic);
    save_mlp(out, agent.actor_target);
    save_mlp(out, agent.critic_target);
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

Agent load_agent(const std::filesystem::path& path, std::uint64_t master_seed,
                 std::uint64_t batch_stream_index) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
    expect_magic(in, kAgentMagic, "agent checkpoint");
    DdpgHyperparams h;
    h.discount = read_f64(in);
    h.tau = read_f64(in);
    h.lr_critic = read_f64(in);
    h.lr_actor = read_f64(in);
    h.batch_size = static_cast<int>(read_u32(in));
    h.epsilon_start = read_f64(in);
    h.epsilon_end = read_f64(in);
    h.epsilon_fraction = read_f64(in);
    h.learn_start = read_u64(in);
    h.replay_capacity = read_u64(in);
    const std::uint32_t n_hidden = read_u32(in);
    if (n_hidden > 62) throw std::runtime_error("checkpoint: network shape mismatch (bad layer count)");
    h.hidden_sizes.resize(n_hidden);
    for (auto& s : h.hidden_sizes) s = static_cast<int>(read_u32(in));
    read_u64(in);  // stored buffer size, informational only
    read_u64(in);  // stored buffer capacity
    read_u64(in);  // total transitions ever pushed
    Mlp actor = load_mlp(in);
    Mlp critic = load_mlp(in);
    Mlp actor_target = load_mlp(in);
    Mlp critic_target = load_mlp(in);
    if (!actor.same_architecture(actor_target) || !critic.same_architecture(critic_target) ||
        critic.input_size() != actor.input_size() + actor.output_size()) {
        throw std::runtime_error("checkpoint: network shape mismatch across agent networks");
    }
    return Agent(std::move(actor), std::move(critic), std::move(actor_target),
                 std::move(critic_target), h, master_seed, batch_stream_index);
}

}  // namespace uam
