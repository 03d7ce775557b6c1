#ifndef SENTPW_CHECKPOINT_HPP
#define SENTPW_CHECKPOINT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sentpw/encoder.hpp"
#include "sentpw/losses.hpp"
#include "sentpw/vocabulary.hpp"

namespace sentpw {

inline constexpr int kCheckpointVersion = 1;

// Text checkpoint:
//
//   SENTPW 1 <vocab_size> <d_in> <d_out> <loss_kind>
//   <vocab_size token lines, id order>
//   <vocab_size embedding rows> <d_in projection rows> <1 bias row>
//   meta <n>
//   <n key=value lines>
//   END
//
// Numbers are space separated, shortest round-trip decimal.
struct Checkpoint {
    Vocabulary vocab;
    EncoderParams params;
    LossKind loss = LossKind::multisim;
    std::vector<std::pair<std::string, std::string>> meta;

    std::optional<std::string> meta_value(std::string_view key) const;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
// Throws CheckpointError naming the line on any mismatch.
Checkpoint parse_checkpoint(std::string_view content);

// Writes to a temporary sibling file and renames it into place.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sentpw

#endif  // SENTPW_CHECKPOINT_HPP
