#include "negotiation/neural/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace negotiation::neural {

namespace {

constexpr char kMagic[8] = {'N', 'E', 'G', 'O', 'C', 'K', 'P', '1'};

struct Writer {
  std::vector<std::uint8_t> out;

  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void f64s(const std::vector<double>& v) {
    u64(v.size());
    raw(v.data(), v.size() * sizeof(double));
  }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  }
};

struct Reader {
  const std::vector<std::uint8_t>& in;
  std::size_t pos = 0;

  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  double f64() { return get<double>(); }
  std::vector<double> f64s() {
    const std::uint64_t n = u64();
    if (n > (in.size() - pos) / sizeof(double))
      throw std::runtime_error("checkpoint: truncated array");
    std::vector<double> v(n);
    std::memcpy(v.data(), in.data() + pos, n * sizeof(double));
    pos += n * sizeof(double);
    return v;
  }
  template <typename T>
  T get() {
    if (pos + sizeof(T) > in.size())
      throw std::runtime_error("checkpoint: truncated");
    T v;
    std::memcpy(&v, in.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
};

void write_stack(Writer& w, const LayerStack& s) {
  w.u32(static_cast<std::uint32_t>(s.specs().size()));
  for (const LayerSpec& l : s.specs()) {
    w.u32(static_cast<std::uint32_t>(l.in));
    w.u32(static_cast<std::uint32_t>(l.out));
    w.u32(static_cast<std::uint32_t>(l.act));
  }
  w.f64s(s.params());
}

void read_stack_into(Reader& r, LayerStack& s) {
  const std::uint32_t layers = r.u32();
  if (layers != s.specs().size())
    throw std::runtime_error("checkpoint: layer count mismatch");
  for (const LayerSpec& l : s.specs()) {
    if (r.u32() != l.in || r.u32() != l.out ||
        r.u32() != static_cast<std::uint32_t>(l.act))
      throw std::runtime_error("checkpoint: layer shape mismatch");
  }
  std::vector<double> params = r.f64s();
  if (params.size() != s.param_count())
    throw std::runtime_error("checkpoint: parameter count mismatch");
  s.params() = std::move(params);
}

void write_adam(Writer& w, const AdamState& a) {
  w.f64(a.cfg.lr);
  w.f64(a.cfg.beta1);
  w.f64(a.cfg.beta2);
  w.f64(a.cfg.eps);
  w.u64(a.step);
  w.u32(static_cast<std::uint32_t>(a.m.size()));
  for (std::size_t i = 0; i < a.m.size(); ++i) {
    w.f64s(a.m[i]);
    w.f64s(a.v[i]);
  }
}

AdamState read_adam(Reader& r, const std::vector<LayerStack*>& stacks) {
  AdamState a;
  a.cfg.lr = r.f64();
  a.cfg.beta1 = r.f64();
  a.cfg.beta2 = r.f64();
  a.cfg.eps = r.f64();
  a.step = r.u64();
  const std::uint32_t n = r.u32();
  if (n != stacks.size())
    throw std::runtime_error("checkpoint: adam stack count mismatch");
  for (std::uint32_t i = 0; i < n; ++i) {
    a.m.push_back(r.f64s());
    a.v.push_back(r.f64s());
    if (a.m.back().size() != stacks[i]->param_count() ||
        a.v.back().size() != stacks[i]->param_count())
      throw std::runtime_error("checkpoint: adam moment size mismatch");
  }
  return a;
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u64(ckpt.master_seed);
  for (std::uint64_t s : ckpt.rng_state) w.u64(s);
  w.u64(ckpt.epochs_trained);
  w.u32(static_cast<std::uint32_t>(ckpt.policies.size()));
  for (const TrainedPolicy& p : ckpt.policies) {
    w.u32(static_cast<std::uint32_t>(p.kind));
    if (p.kind == PolicyKind::kOffer) {
      if (!p.offer) throw std::runtime_error("checkpoint: offer policy missing net");
      const OfferNetConfig& c = p.offer->cfg;
      w.u32(static_cast<std::uint32_t>(c.input_dim));
      w.u32(static_cast<std::uint32_t>(c.issues));
      w.u32(static_cast<std::uint32_t>(c.head));
      w.u32(static_cast<std::uint32_t>(c.trunk_width));
      w.u32(static_cast<std::uint32_t>(c.value_width));
      w.u32(static_cast<std::uint32_t>(c.value_layers));
      w.u32(static_cast<std::uint32_t>(c.head_width));
      w.f64(c.scale_floor);
      w.f64(c.beta_offset);
      w.u32(static_cast<std::uint32_t>(c.entropy));
      for (const LayerStack* s : p.offer->stacks()) write_stack(w, *s);
    } else {
      if (!p.binary) throw std::runtime_error("checkpoint: binary policy missing net");
      w.u32(static_cast<std::uint32_t>(p.binary->cfg.input_dim));
      w.u32(static_cast<std::uint32_t>(p.binary->cfg.hidden));
      for (const LayerStack* s : p.binary->stacks()) write_stack(w, *s);
    }
    write_adam(w, p.adam);
  }
  return std::move(w.out);
}

Checkpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r{bytes};
  char magic[8];
  for (auto& ch : magic) ch = static_cast<char>(r.get<std::uint8_t>());
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("checkpoint: bad magic");

  Checkpoint ckpt;
  ckpt.master_seed = r.u64();
  for (auto& s : ckpt.rng_state) s = r.u64();
  ckpt.epochs_trained = r.u64();
  const std::uint32_t count = r.u32();
  Rng scratch(0);
  for (std::uint32_t i = 0; i < count; ++i) {
    TrainedPolicy p;
    const std::uint32_t kind = r.u32();
    if (kind > 2) throw std::runtime_error("checkpoint: unknown policy kind");
    p.kind = static_cast<PolicyKind>(kind);
    if (p.kind == PolicyKind::kOffer) {
      OfferNetConfig c;
      c.input_dim = static_cast<int>(r.u32());
      c.issues = static_cast<int>(r.u32());
      c.head = static_cast<HeadKind>(r.u32());
      c.trunk_width = static_cast<int>(r.u32());
      c.value_width = static_cast<int>(r.u32());
      c.value_layers = static_cast<int>(r.u32());
      c.head_width = static_cast<int>(r.u32());
      c.scale_floor = r.f64();
      c.beta_offset = r.f64();
      c.entropy = static_cast<EntropyFormula>(r.u32());
      p.offer = build_offer_net(c, scratch);
      for (LayerStack* s : p.offer->stacks()) read_stack_into(r, *s);
      p.adam = read_adam(r, p.offer->stacks());
    } else {
      ActorCriticConfig c;
      c.input_dim = static_cast<int>(r.u32());
      c.hidden = static_cast<int>(r.u32());
      p.binary = build_accept_net(c, scratch);
      for (LayerStack* s : p.binary->stacks()) read_stack_into(r, *s);
      p.adam = read_adam(r, p.binary->stacks());
    }
    ckpt.policies.push_back(std::move(p));
  }
  if (r.pos != bytes.size())
    throw std::runtime_error("checkpoint: trailing bytes");
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  const std::vector<std::uint8_t> bytes = serialize_checkpoint(ckpt);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace negotiation::neural
