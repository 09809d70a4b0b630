#ifndef NEGOTIATION_NEURAL_CHECKPOINT_HPP_
#define NEGOTIATION_NEURAL_CHECKPOINT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "negotiation/neural/adam.hpp"
#include "negotiation/neural/nets.hpp"
#include "negotiation/rng.hpp"

namespace negotiation::neural {

enum class PolicyKind : std::uint32_t {
  kAccept = 0,
  kOffer = 1,
  kMinigameOffer = 2,
};

struct TrainedPolicy {
  PolicyKind kind = PolicyKind::kAccept;
  std::optional<ActorCriticNet> binary;  // accept / minigame offer policies
  std::optional<OfferNet> offer;
  AdamState adam;
};

// Flat binary container: magic + master seed + generator state + per policy
// the architecture dims, per-layer row-major parameter arrays and the Adam
// state. The byte layout is fixed (little-endian) so checkpoints are
// diffable and training is resumable.
struct Checkpoint {
  std::uint64_t master_seed = 0;
  Rng::State rng_state{};
  std::uint64_t epochs_trained = 0;
  std::vector<TrainedPolicy> policies;
};

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt);
// Throws std::runtime_error on magic/shape mismatches.
Checkpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace negotiation::neural

#endif  // NEGOTIATION_NEURAL_CHECKPOINT_HPP_
