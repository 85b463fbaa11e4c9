#include "herman/train.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <map>

#include "herman/errors.hpp"
#include "herman/optim.hpp"
#include "herman/parallel.hpp"
#include "herman/rng.hpp"
#include "json.hpp"

namespace herman {
namespace {

// An instance forward/backward dwarfs fork/join overhead at any model size.
constexpr std::size_t kInstanceCost = std::size_t{1} << 20;

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ParamStore grads_buffer(const ParamStore& src) {
  ParamStore out;
  for (const auto& [name, p] : src.params) out.add(name, Tensor::zeros(p.shape));
  return out;
}

// Runs fn(i) for i in [0, n) across the worker threads, rethrowing the first
// captured exception.
template <typename Fn>
void parallel_over(std::size_t n, Fn&& fn) {
  int threads = threads_for(n, kInstanceCost);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double mean_loss(const HermanModel& model, const std::vector<LabeledInstance>& data) {
  std::vector<double> losses(data.size());
  parallel_over(data.size(), [&](std::size_t i) { losses[i] = model.instance_loss(data[i]); });
  double total = 0.0;
  for (double l : losses) total += l;
  return total / static_cast<double>(data.size());
}

}  // namespace

TrainResult train_model(HermanModel& model, const std::vector<LabeledInstance>& train_set,
                        const std::vector<LabeledInstance>& val_set) {
  if (train_set.empty() || val_set.empty())
    throw DataError("train: both the training and validation splits must be non-empty");
  const HermanConfig& config = model.config();
  ParamStore& store = model.params();
  Adam optimizer(AdamConfig{config.lr, 0.9, 0.999, 1e-8});

  TrainResult result;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  std::map<std::string, Tensor> best_params = store.params;
  std::size_t epochs_without_improvement = 0;

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  // Each wave runs at most one instance per worker; buffers are folded in
  // instance order afterwards so the sum never depends on the thread count.
  std::size_t wave = static_cast<std::size_t>(std::max(1, threads_for(config.batch_size, kInstanceCost)));
  std::vector<ParamStore> buffers;
  for (std::size_t i = 0; i < wave; ++i) buffers.push_back(grads_buffer(store));

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Rng shuffle_rng = Rng::keyed(config.seed, "train/shuffle", epoch);
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t batch_start = 0; batch_start < order.size();
         batch_start += config.batch_size) {
      std::size_t batch_n = std::min(config.batch_size, order.size() - batch_start);
      store.zero_grads();

      for (std::size_t wave_start = 0; wave_start < batch_n; wave_start += wave) {
        std::size_t wave_n = std::min(wave, batch_n - wave_start);
        std::vector<double> losses(wave_n);
        parallel_over(wave_n, [&](std::size_t slot) {
          const LabeledInstance& inst = train_set[order[batch_start + wave_start + slot]];
          buffers[slot].zero_grads();
          Tape t(&store);
          Tape::NodeId loss = model.instance_loss_graph(t, inst);
          losses[slot] = t.value(loss)(0);
          t.backward(loss);
          t.accumulate_into(buffers[slot]);
        });
        for (std::size_t slot = 0; slot < wave_n; ++slot) {
          if (!std::isfinite(losses[slot])) {
            const LabeledInstance& inst = train_set[order[batch_start + wave_start + slot]];
            throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                               ", instance " + inst.record.id);
          }
          epoch_loss += losses[slot];
          for (auto& [name, g] : store.grads) g.add_in_place(buffers[slot].grads.at(name));
        }
      }

      double inv = 1.0 / static_cast<double>(batch_n);
      for (auto& [name, g] : store.grads) g.scale_in_place(inv);
      clip_global_norm(store, config.clip_norm);
      optimizer.step(store);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(train_set.size());
    stats.val_loss = mean_loss(model, val_set);
    stats.timestamp = utc_timestamp();
    result.log.push_back(stats);
    if (!std::isfinite(stats.val_loss))
      throw NumericError("train: non-finite validation loss at epoch " + std::to_string(epoch));

    if (stats.val_loss < result.best_val_loss) {
      result.best_val_loss = stats.val_loss;
      result.best_epoch = epoch;
      best_params = store.params;
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement > config.patience) break;
    }
  }

  store.params = best_params;
  return result;
}

DatasetSplit split_dataset(std::vector<LabeledInstance> data, std::uint64_t seed) {
  if (data.empty()) throw DataError("cannot split an empty dataset");
  Rng rng = Rng::keyed(seed, "split", 0);
  rng.shuffle(data);
  std::size_t n = data.size();
  std::size_t train_n = n * 8 / 10;
  std::size_t val_n = n * 9 / 10 - train_n;
  DatasetSplit split;
  split.train.assign(data.begin(), data.begin() + train_n);
  split.val.assign(data.begin() + train_n, data.begin() + train_n + val_n);
  split.test.assign(data.begin() + train_n + val_n, data.end());
  return split;
}

void write_train_log(const std::string& path, const TrainResult& result,
                     const FileHeader& header) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot write training log: " + path);
  nlohmann::json head = {{"_type", "header"},
                         {"tool", "herman"},
                         {"tool_version", header.tool_version},
                         {"config_hash", header.config_hash},
                         {"seed", header.seed}};
  os << head.dump() << "\n";
  for (const EpochStats& s : result.log) {
    nlohmann::json j = {{"epoch", s.epoch},
                        {"train_loss", s.train_loss},
                        {"val_loss", s.val_loss},
                        {"timestamp", s.timestamp}};
    os << j.dump() << "\n";
  }
  if (!os) throw DataError("training log write failed: " + path);
}

}  // namespace herman
