#include "mksim/simulation.hpp"

#include <fstream>
#include <numeric>
#include <stdexcept>

#include "mksim/errors.hpp"

namespace mksim {

void ModelRegistry::register_model(std::string id, SetupFn setup, LoadFn load) {
  models_[std::move(id)] = Entry{std::move(setup), std::move(load)};
}

bool ModelRegistry::contains(std::string_view id) const {
  return models_.find(id) != models_.end();
}

const ModelRegistry::Entry& ModelRegistry::find(std::string_view id) const {
  const auto it = models_.find(id);
  if (it == models_.end())
    throw UnknownModelError("unknown model id: " + std::string(id));
  return it->second;
}

std::unique_ptr<World> ModelRegistry::setup(std::string_view id, const KeyValueConfig& config,
                                            Rng& rng) const {
  return find(id).setup(config, rng);
}

std::unique_ptr<World> ModelRegistry::load(std::string_view id, ByteReader& in) const {
  return find(id).load(in);
}

std::vector<unsigned char> Snapshot::to_bytes() const {
  ByteWriter w;
  w.raw(kMagic);
  w.u32(format_version);
  w.str(model_id);
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.raw(payload);
  w.u64(checksum);
  return w.take();
}

Snapshot Snapshot::from_bytes(std::span<const unsigned char> bytes) {
  if (bytes.size() < kMagic.size() + 8) throw SnapshotError("snapshot too short");
  for (std::size_t i = 0; i < kMagic.size(); ++i)
    if (bytes[i] != kMagic[i]) throw SnapshotError("snapshot: bad magic bytes");

  ByteReader r(bytes.subspan(kMagic.size()));
  Snapshot s;
  s.format_version = r.u32();
  if (s.format_version != kFormatVersion)
    throw VersionError("snapshot: unsupported format version " +
                       std::to_string(s.format_version));
  s.model_id = r.str();
  const std::uint32_t payload_len = r.u32();
  const auto payload = r.raw(payload_len);
  s.payload.assign(payload.begin(), payload.end());
  s.checksum = r.u64();
  if (!r.done()) throw SnapshotError("snapshot: trailing bytes");

  const std::uint64_t actual = fnv1a64(bytes.first(bytes.size() - 8));
  if (actual != s.checksum) throw ChecksumError("snapshot: checksum mismatch");
  return s;
}

void Snapshot::write_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("cannot open snapshot file for writing: " + path.string());
  const auto bytes = to_bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("snapshot write failed: " + path.string());
}

Snapshot Snapshot::read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return from_bytes(bytes);
}

Simulation::Simulation(std::uint64_t tick, Rng rng, std::unique_ptr<World> world)
    : tick_(tick), rng_(rng), world_(std::move(world)) {}

Simulation Simulation::setup(const ModelRegistry& registry, std::string_view model_id,
                             const KeyValueConfig& config, Seed seed) {
  Rng rng(seed);
  auto world = registry.setup(model_id, config, rng);
  return Simulation(0, rng, std::move(world));
}

void Simulation::step() {
  const std::size_t n = world_->agent_count();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  shuffle(rng_, order_);
  for (const std::size_t agent : order_) world_->agent_act(agent, rng_);
  ++tick_;
}

void Simulation::run_until(std::uint64_t target_tick) {
  if (target_tick < tick_)
    throw std::invalid_argument("run_until: target tick is in the past");
  while (tick_ < target_tick) step();
}

Snapshot Simulation::make_snapshot() const {
  ByteWriter payload;
  payload.u64(tick_);
  rng_.save(payload);
  ByteWriter world_bytes;
  world_->save(world_bytes);
  payload.u32(static_cast<std::uint32_t>(world_bytes.bytes().size()));
  payload.raw(world_bytes.bytes());

  Snapshot s;
  s.model_id = std::string(world_->model_id());
  s.payload = payload.take();

  // Checksum covers every byte that precedes it in the serialized form.
  const auto bytes_sans_checksum = [&] {
    ByteWriter w;
    w.raw(Snapshot::kMagic);
    w.u32(s.format_version);
    w.str(s.model_id);
    w.u32(static_cast<std::uint32_t>(s.payload.size()));
    w.raw(s.payload);
    return w.take();
  }();
  s.checksum = fnv1a64(bytes_sans_checksum);
  return s;
}

Simulation Simulation::restore(const ModelRegistry& registry, const Snapshot& snapshot) {
  if (snapshot.format_version != Snapshot::kFormatVersion)
    throw VersionError("snapshot: unsupported format version " +
                       std::to_string(snapshot.format_version));
  ByteReader r(snapshot.payload);
  const std::uint64_t tick = r.u64();
  const RngState rng_state = Rng::load_state(r);
  Rng rng(rng_state);  // throws VersionError on algorithm mismatch
  const std::uint32_t world_len = r.u32();
  ByteReader world_reader(r.raw(world_len));
  auto world = registry.load(snapshot.model_id, world_reader);
  if (!world_reader.done()) throw SnapshotError("snapshot: unread world payload bytes");
  if (!r.done()) throw SnapshotError("snapshot: trailing payload bytes");
  return Simulation(tick, rng, std::move(world));
}

Simulation Simulation::fork() const {
  return Simulation(tick_, rng_, world_->clone());
}

}  // namespace mksim
