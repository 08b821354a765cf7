#include "panolayout/losses.hpp"

#include <stdexcept>
#include <string>

namespace panolayout {

namespace {

void require_scores(ScoreBatch s, const char* what) {
  if (s.empty()) throw std::invalid_argument(std::string(what) + ": empty score batch");
}

double mean(ScoreBatch s) {
  double sum = 0.0;
  for (double v : s) sum += v;
  return sum / static_cast<double>(s.size());
}

double mean_complement(ScoreBatch s) {
  double sum = 0.0;
  for (double v : s) sum += 1.0 - v;
  return sum / static_cast<double>(s.size());
}

}  // namespace

double loss_G(ScoreBatch fake_scores) {
  require_scores(fake_scores, "loss_G");
  return mean_complement(fake_scores);
}

double loss_D(ScoreBatch fake_scores, ScoreBatch real_scores) {
  require_scores(fake_scores, "loss_D");
  require_scores(real_scores, "loss_D");
  return mean(fake_scores) + mean_complement(real_scores);
}

double loss_recon(ImageBatch a, ImageBatch b) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("loss_recon: batches must be non-empty and equally sized");
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].same_shape(a[0]) || !b[k].same_shape(a[0]))
      throw std::invalid_argument("loss_recon: image shapes differ");
    const auto va = a[k].values();
    const auto vb = b[k].values();
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double diff = va[i] - vb[i];
      total += diff * diff;
    }
  }
  return total / static_cast<double>(a.size());
}

double loss_cycle(ImageBatch backgrounds, ImageBatch emptied_fakes) {
  return loss_recon(backgrounds, emptied_fakes);
}

EmptierLoss emptier_loss(ScoreBatch real_empty, ScoreBatch fake_empty, ImageBatch backgrounds,
                         ImageBatch emptied) {
  require_scores(real_empty, "loss_emp");
  require_scores(fake_empty, "loss_emp");
  EmptierLoss out;
  out.generator = mean_complement(fake_empty);
  out.discriminator = mean_complement(real_empty) + mean(fake_empty);
  out.recon = loss_recon(backgrounds, emptied);
  return out;
}

double loss_emp(ScoreBatch real_empty, ScoreBatch fake_empty, ImageBatch backgrounds,
                ImageBatch emptied) {
  return emptier_loss(real_empty, fake_empty, backgrounds, emptied).total();
}

double loss_total(double g, double d, double cycle, const LossWeights& weights) {
  if (weights.lambda_gan < 0.0 || weights.lambda_cycle < 0.0)
    throw std::invalid_argument("loss weights must be non-negative");
  return weights.lambda_gan * (g + d) + weights.lambda_cycle * cycle;
}

}  // namespace panolayout
