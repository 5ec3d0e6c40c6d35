// Copyright 2026 pcgvae authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pcgvae/checkpoint.hpp"

#include <sstream>
#include <stdexcept>

#include "pcgvae/text_io.hpp"

namespace pcgvae {

namespace {

constexpr const char* kMagic = "pcgvae checkpoint v1";

void emit_tensor(std::ostringstream& out, const std::string& name,
                 const Matrix& m) {
  out << "tensor " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void emit_tensor(std::ostringstream& out, const std::string& name,
                 const RowVector& v) {
  emit_tensor(out, name, Matrix(v));
}

void emit_layer(std::ostringstream& out, const std::string& prefix,
                const DenseLayer& layer) {
  emit_tensor(out, prefix + ".weight", layer.weight);
  emit_tensor(out, prefix + ".bias", layer.bias);
  if (layer.spec.batch_norm) {
    emit_tensor(out, prefix + ".bn_scale", layer.bn_scale);
    emit_tensor(out, prefix + ".bn_shift", layer.bn_shift);
    emit_tensor(out, prefix + ".bn_run_mean", layer.bn_run_mean);
    emit_tensor(out, prefix + ".bn_run_var", layer.bn_run_var);
  }
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : lines_(split(text, '\n')) {}

  std::string next() {
    while (pos_ < lines_.size()) {
      std::string line(trim(lines_[pos_++]));
      if (!line.empty()) return line;
    }
    throw std::runtime_error("checkpoint: unexpected end of document");
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

// "key value..." -> value..., insisting on the key.
std::string expect_field(LineReader& reader, const std::string& key) {
  const std::string line = reader.next();
  if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
      line[key.size()] != ' ') {
    throw std::runtime_error("checkpoint: expected '" + key + " ...', got '" +
                             line + "'");
  }
  return line.substr(key.size() + 1);
}

Matrix read_tensor(LineReader& reader, const std::string& name, Index rows,
                   Index cols) {
  const auto header = split(expect_field(reader, "tensor"), ' ');
  if (header.size() != 3 || header[0] != name) {
    throw std::runtime_error("checkpoint: expected tensor " + name);
  }
  if (parse_int(header[1]) != rows || parse_int(header[2]) != cols) {
    throw std::runtime_error("checkpoint: tensor " + name + " has shape " +
                             header[1] + "x" + header[2] + ", expected " +
                             std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto row = split(reader.next(), ' ');
    if (static_cast<Index>(row.size()) != cols) {
      throw std::runtime_error("checkpoint: tensor " + name + " row " +
                               std::to_string(i) + " has wrong width");
    }
    for (Index j = 0; j < cols; ++j) m(i, j) = parse_double(row[j]);
  }
  return m;
}

void read_layer(LineReader& reader, const std::string& prefix, DenseLayer& layer) {
  layer.weight = read_tensor(reader, prefix + ".weight", layer.spec.in_dim,
                             layer.spec.out_dim);
  layer.bias = read_tensor(reader, prefix + ".bias", 1, layer.spec.out_dim);
  if (layer.spec.batch_norm) {
    layer.bn_scale = read_tensor(reader, prefix + ".bn_scale", 1, layer.spec.out_dim);
    layer.bn_shift = read_tensor(reader, prefix + ".bn_shift", 1, layer.spec.out_dim);
    layer.bn_run_mean =
        read_tensor(reader, prefix + ".bn_run_mean", 1, layer.spec.out_dim);
    layer.bn_run_var =
        read_tensor(reader, prefix + ".bn_run_var", 1, layer.spec.out_dim);
  }
}

}  // namespace

std::string serialize_checkpoint(const VaeModel& model,
                                 const TrainConfig& train_config) {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "mode " << mode_name(model.mode) << '\n';
  out << "beta " << format_double(model.beta) << '\n';
  out << "input_dim " << model.input_dim << '\n';
  out << "latent_dim " << model.latent_dim << '\n';
  out << "encoder_hidden";
  for (const int h : model.encoder_hidden_dims()) out << ' ' << h;
  out << '\n';
  out << "train_batch_size " << train_config.batch_size << '\n';
  out << "train_epochs " << train_config.epochs << '\n';
  out << "train_learning_rate " << format_double(train_config.learning_rate)
      << '\n';
  out << "train_seed " << train_config.seed << '\n';
  out << "train_optimizer adam\n";
  for (std::size_t i = 0; i < model.encoder.size(); ++i) {
    emit_layer(out, "encoder" + std::to_string(i), model.encoder[i]);
  }
  emit_layer(out, "mu_head", model.mu_head);
  if (model.has_logvar_head()) emit_layer(out, "logvar_head", model.logvar_head);
  for (std::size_t i = 0; i < model.decoder.size(); ++i) {
    emit_layer(out, "decoder" + std::to_string(i), model.decoder[i]);
  }
  out << "end\n";
  return out.str();
}

Checkpoint parse_checkpoint(const std::string& text) {
  LineReader reader(text);
  if (reader.next() != kMagic) {
    throw std::runtime_error("checkpoint: bad magic line (expected '" +
                             std::string(kMagic) + "')");
  }

  const ModelMode mode = mode_from_name(expect_field(reader, "mode"));
  const Scalar beta = parse_double(expect_field(reader, "beta"));
  VaeArch arch;
  arch.input_dim = static_cast<int>(parse_int(expect_field(reader, "input_dim")));
  arch.latent_dim = static_cast<int>(parse_int(expect_field(reader, "latent_dim")));
  arch.encoder_hidden.clear();
  for (const auto& tok : split(expect_field(reader, "encoder_hidden"), ' ')) {
    arch.encoder_hidden.push_back(static_cast<int>(parse_int(tok)));
  }

  Checkpoint ck;
  ck.train_config.batch_size =
      static_cast<int>(parse_int(expect_field(reader, "train_batch_size")));
  ck.train_config.epochs =
      static_cast<int>(parse_int(expect_field(reader, "train_epochs")));
  ck.train_config.learning_rate =
      parse_double(expect_field(reader, "train_learning_rate"));
  ck.train_config.seed = static_cast<std::uint64_t>(
      parse_int(expect_field(reader, "train_seed")));
  const std::string optimizer = expect_field(reader, "train_optimizer");
  if (optimizer != "adam") {
    throw std::runtime_error("checkpoint: unknown optimizer " + optimizer);
  }

  // Build the structure, then overwrite every tensor from the document.
  ck.model = init_model(beta, 0, mode, arch);
  ck.model.beta = beta;
  for (std::size_t i = 0; i < ck.model.encoder.size(); ++i) {
    read_layer(reader, "encoder" + std::to_string(i), ck.model.encoder[i]);
  }
  read_layer(reader, "mu_head", ck.model.mu_head);
  if (ck.model.has_logvar_head()) {
    read_layer(reader, "logvar_head", ck.model.logvar_head);
  }
  for (std::size_t i = 0; i < ck.model.decoder.size(); ++i) {
    read_layer(reader, "decoder" + std::to_string(i), ck.model.decoder[i]);
  }
  if (reader.next() != "end") {
    throw std::runtime_error("checkpoint: missing end marker");
  }
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const VaeModel& model,
                     const TrainConfig& train_config) {
  write_text_file(path, serialize_checkpoint(model, train_config));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  try {
    return parse_checkpoint(read_text_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace pcgvae
