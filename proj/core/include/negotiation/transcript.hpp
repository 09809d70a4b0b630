#ifndef NEGOTIATION_TRANSCRIPT_HPP_
#define NEGOTIATION_TRANSCRIPT_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "negotiation/scenario.hpp"

namespace negotiation {

enum class EventType { kOffer, kAccept, kReject, kClampWarning };
enum class EndState { kAccepted, kConflictDeal };

struct Event {
  int round = 0;
  Side actor = Side::kA;
  EventType type = EventType::kOffer;
  // Offer events: the proposed shares (post-clamp). Accept/reject events: the
  // shares being decided on. Clamp warnings: the raw out-of-range vector.
  Offer shares;
};

struct Transcript {
  int issues = 0;
  std::vector<Event> events;
  EndState end_state = EndState::kConflictDeal;
  int end_round = 0;
  Offer final_offer;            // accepted offer (proposer's kept shares)
  Side final_proposer = Side::kA;
  double reward_a = 0.0;        // populated by the consuming module
  double reward_b = 0.0;

  bool accepted() const { return end_state == EndState::kAccepted; }
};

std::string to_string(EventType t);
std::string to_string(EndState s);
std::string to_string(Side s);

// CSV schema: one row per event, columns
//   game_id, round, actor, action, share_1..share_m, reward_a, reward_b, end_state
// The reward and end_state columns repeat the game's final values on every
// row so each row is self-contained. A schema line heads the file.
extern const char kTranscriptSchema[];

void write_transcript_csv(std::ostream& os, std::span<const Transcript> games);

}  // namespace negotiation

#endif  // NEGOTIATION_TRANSCRIPT_HPP_
