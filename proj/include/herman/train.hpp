#ifndef HERMAN_TRAIN_HPP
#define HERMAN_TRAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "herman/io.hpp"
#include "herman/labels.hpp"
#include "herman/model.hpp"

namespace herman {

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  std::string timestamp;  // UTC, ISO 8601
};

struct TrainResult {
  std::vector<EpochStats> log;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
};

// Mini-batch Adam with global-norm clipping and early stopping on validation
// loss. The model ends up holding the best-validation parameters. Gradients
// are folded in instance order regardless of thread count, so a fixed seed
// reproduces the loss trajectory exactly.
TrainResult train_model(HermanModel& model, const std::vector<LabeledInstance>& train_set,
                        const std::vector<LabeledInstance>& val_set);

struct DatasetSplit {
  std::vector<LabeledInstance> train;
  std::vector<LabeledInstance> val;
  std::vector<LabeledInstance> test;
};

// Shuffled 80/10/10 split.
DatasetSplit split_dataset(std::vector<LabeledInstance> data, std::uint64_t seed);

// A provenance header line, then one JSON object per epoch:
// {"epoch", "train_loss", "val_loss", "timestamp"}.
void write_train_log(const std::string& path, const TrainResult& result,
                     const FileHeader& header);

}  // namespace herman

#endif
