#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pvmppt/ann.hpp"
#include "pvmppt/io.hpp"

namespace pvmppt::ann {

namespace {

constexpr const char* kFormatTag = "mlpw-1";

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_doubles(const double* values, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ',';
    out += io::format_double(values[i], 17);
  }
  return out;
}

void ensure_finite(const MlpNetwork& net) {
  for (const auto& layer : net.weights) {
    for (double w : layer) {
      if (!std::isfinite(w)) throw std::runtime_error("refusing to export non-finite weights");
    }
  }
  for (const auto& layer : net.biases) {
    for (double b : layer) {
      if (!std::isfinite(b)) throw std::runtime_error("refusing to export non-finite weights");
    }
  }
}

std::string export_portable(const MlpNetwork& net, const dataset::NormalizationParams& norm,
                            const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string out = std::string(kFormatTag) + "\n";
  out += "[meta]\n";
  out += "layer_sizes = " + join_ints(net.layer_sizes) + "\n";
  out += "hidden_activation = " + std::string(to_string(net.hidden_activation)) + "\n";
  out += "output_activation = " + std::string(to_string(net.output_activation)) + "\n";
  for (const auto& [key, value] : meta) {
    out += key + " = " + value + "\n";
  }
  out += "[normalization]\n";
  const auto put_range = [&out](const char* name, const dataset::FeatureRange& r) {
    out += std::string(name) + ".min = " + io::format_double(r.min, 17) + "\n";
    out += std::string(name) + ".max = " + io::format_double(r.max, 17) + "\n";
  };
  put_range("irradiance", norm.irradiance);
  put_range("temperature", norm.temperature);
  put_range("load", norm.load);
  put_range("duty", norm.duty);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    out += "[layer " + std::to_string(l + 1) + "]\n";
    out += "rows = " + std::to_string(rows) + "\n";
    out += "cols = " + std::to_string(cols) + "\n";
    for (int r = 0; r < rows; ++r) {
      out += "row." + std::to_string(r) + " = " +
             join_doubles(net.weights[l].data() + static_cast<std::size_t>(r) * cols, cols) + "\n";
    }
    out += "bias = " + join_doubles(net.biases[l].data(), net.biases[l].size()) + "\n";
  }
  return out;
}

// C expression for one element-wise activation; 'v' is the input variable.
std::string c_activation_expr(Activation kind) {
  switch (kind) {
    case Activation::tanh: return "tanh(v)";
    case Activation::linear: return "v";
    case Activation::relu: return "(v > 0.0 ? v : 0.0)";
    case Activation::gelu: return "0.5 * v * (1.0 + erf(v * 0.70710678118654752))";
    case Activation::selu:
      return "(v > 0.0 ? 1.0507009873554805 * v : 1.7580993408473766 * (exp(v) - 1.0))";
    case Activation::sigmoid: return "1.0 / (1.0 + exp(-v))";
    case Activation::softplus: return "(v > 0.0 ? v + log1p(exp(-v)) : log1p(exp(v)))";
    case Activation::softsign: return "v / (1.0 + fabs(v))";
    case Activation::swish: return "v / (1.0 + exp(-v))";
    case Activation::softmax:
      throw std::invalid_argument("softmax handled as a vector pass");
  }
  throw std::logic_error("unknown activation");
}

std::string export_c_source(const MlpNetwork& net, const dataset::NormalizationParams& norm,
                            const std::vector<std::pair<std::string, std::string>>& meta) {
  const std::size_t layers = net.layer_count();
  const int input_size = net.input_size();
  int max_width = 0;
  for (int n : net.layer_sizes) max_width = std::max(max_width, n);

  std::string out;
  out += "/* Duty-cycle MLP inference, generated from trained weights (" +
         std::string(kFormatTag) + ").\n";
  out += " * Inputs: irradiance (W/m2), temperature (degC), load resistance (ohm).\n";
  out += " * Output: converter duty cycle, clamped to [0.05, 0.95].\n";
  for (const auto& [key, value] : meta) {
    out += " * " + key + ": " + value + "\n";
  }
  out += " */\n\n#include <math.h>\n\n";
  out += "#define MLP_LAYER_COUNT " + std::to_string(layers) + "\n";
  out += "#define MLP_MAX_WIDTH " + std::to_string(max_width) + "\n\n";
  out += "static const int mlp_layer_sizes[" + std::to_string(layers + 1) + "] = {" +
         join_ints(net.layer_sizes) + "};\n\n";

  for (std::size_t l = 0; l < layers; ++l) {
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    out += "static const double mlp_weights_" + std::to_string(l + 1) + "[" +
           std::to_string(rows * cols) + "] = {\n";
    for (int r = 0; r < rows; ++r) {
      out += "    ";
      for (int c = 0; c < cols; ++c) {
        out += io::format_double(net.weights[l][static_cast<std::size_t>(r) * cols + c], 17);
        out += ",";
        out += c + 1 < cols ? " " : "\n";
      }
    }
    out += "};\n";
    out += "static const double mlp_biases_" + std::to_string(l + 1) + "[" +
           std::to_string(rows) + "] = {\n    ";
    for (int r = 0; r < rows; ++r) {
      out += io::format_double(net.biases[l][r], 17);
      out += r + 1 < rows ? ", " : ",\n";
    }
    out += "};\n\n";
  }

  out += "static const double* const mlp_weights[MLP_LAYER_COUNT] = {";
  for (std::size_t l = 0; l < layers; ++l) {
    out += "mlp_weights_" + std::to_string(l + 1);
    if (l + 1 < layers) out += ", ";
  }
  out += "};\n";
  out += "static const double* const mlp_biases[MLP_LAYER_COUNT] = {";
  for (std::size_t l = 0; l < layers; ++l) {
    out += "mlp_biases_" + std::to_string(l + 1);
    if (l + 1 < layers) out += ", ";
  }
  out += "};\n\n";

  out += "static const double mlp_input_min[" + std::to_string(input_size) + "] = {" +
         io::format_double(norm.irradiance.min, 17) + ", " +
         io::format_double(norm.temperature.min, 17) + ", " +
         io::format_double(norm.load.min, 17) + "};\n";
  out += "static const double mlp_input_max[" + std::to_string(input_size) + "] = {" +
         io::format_double(norm.irradiance.max, 17) + ", " +
         io::format_double(norm.temperature.max, 17) + ", " +
         io::format_double(norm.load.max, 17) + "};\n";
  out += "static const double mlp_duty_min = " + io::format_double(norm.duty.min, 17) + ";\n";
  out += "static const double mlp_duty_max = " + io::format_double(norm.duty.max, 17) + ";\n\n";

  const bool hidden_softmax = net.hidden_activation == Activation::softmax;
  const bool output_softmax = net.output_activation == Activation::softmax;
  if (!hidden_softmax) {
    out += "static double mlp_hidden_activation(double v) {\n";
    out += "    return " + c_activation_expr(net.hidden_activation) + ";\n";
    out += "}\n\n";
  }
  if (!output_softmax) {
    out += "static double mlp_output_activation(double v) {\n";
    out += "    return " + c_activation_expr(net.output_activation) + ";\n";
    out += "}\n\n";
  }
  out += "static void mlp_activate(double* values, int n, int is_output) {\n";
  out += "    int i;\n";
  if (hidden_softmax && output_softmax) out += "    (void)is_output;\n";
  if (hidden_softmax || output_softmax) {
    out += "    if (" + std::string(hidden_softmax && output_softmax
                                        ? "1"
                                        : (output_softmax ? "is_output" : "!is_output")) +
           ") {\n";
    out += "        double m = values[0];\n";
    out += "        double sum = 0.0;\n";
    out += "        for (i = 1; i < n; ++i) { if (values[i] > m) m = values[i]; }\n";
    out += "        for (i = 0; i < n; ++i) { values[i] = exp(values[i] - m); sum += values[i]; }\n";
    out += "        for (i = 0; i < n; ++i) { values[i] /= sum; }\n";
    out += "        return;\n";
    out += "    }\n";
  }
  if (!hidden_softmax && !output_softmax) {
    out += "    for (i = 0; i < n; ++i) {\n";
    out += "        values[i] = is_output ? mlp_output_activation(values[i])\n";
    out += "                              : mlp_hidden_activation(values[i]);\n";
    out += "    }\n";
  } else if (hidden_softmax && !output_softmax) {
    out += "    for (i = 0; i < n; ++i) values[i] = mlp_output_activation(values[i]);\n";
  } else if (!hidden_softmax && output_softmax) {
    out += "    for (i = 0; i < n; ++i) values[i] = mlp_hidden_activation(values[i]);\n";
  }
  out += "}\n\n";

  out += "double mlp_infer(const double inputs[" + std::to_string(input_size) + "]) {\n";
  out += "    double a[MLP_MAX_WIDTH];\n";
  out += "    double b[MLP_MAX_WIDTH];\n";
  out += "    double* cur = a;\n";
  out += "    double* next = b;\n";
  out += "    int layer, i, j;\n";
  out += "    for (i = 0; i < mlp_layer_sizes[0]; ++i) {\n";
  out += "        cur[i] = -1.0 + 2.0 * (inputs[i] - mlp_input_min[i])\n";
  out += "                 / (mlp_input_max[i] - mlp_input_min[i]);\n";
  out += "    }\n";
  out += "    for (layer = 0; layer < MLP_LAYER_COUNT; ++layer) {\n";
  out += "        const int rows = mlp_layer_sizes[layer + 1];\n";
  out += "        const int cols = mlp_layer_sizes[layer];\n";
  out += "        double* tmp;\n";
  out += "        for (i = 0; i < rows; ++i) {\n";
  out += "            double acc = mlp_biases[layer][i];\n";
  out += "            for (j = 0; j < cols; ++j) {\n";
  out += "                acc += mlp_weights[layer][i * cols + j] * cur[j];\n";
  out += "            }\n";
  out += "            next[i] = acc;\n";
  out += "        }\n";
  out += "        mlp_activate(next, rows, layer + 1 == MLP_LAYER_COUNT);\n";
  out += "        tmp = cur; cur = next; next = tmp;\n";
  out += "    }\n";
  out += "    {\n";
  out += "        double duty = mlp_duty_min + (cur[0] + 1.0) * (mlp_duty_max - mlp_duty_min) * 0.5;\n";
  out += "        if (duty < 0.05) duty = 0.05;\n";
  out += "        if (duty > 0.95) duty = 0.95;\n";
  out += "        return duty;\n";
  out += "    }\n";
  out += "}\n";
  return out;
}

}  // namespace

std::string export_weights(const MlpNetwork& net, const dataset::NormalizationParams& norm,
                           ExportFormat format,
                           const std::vector<std::pair<std::string, std::string>>& meta) {
  net.validate();
  ensure_finite(net);
  switch (format) {
    case ExportFormat::portable_text: return export_portable(net, norm, meta);
    case ExportFormat::c_source: return export_c_source(net, norm, meta);
  }
  throw std::logic_error("unknown export format");
}

ImportedNetwork import_weights(std::string_view text) {
  const std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos || io::trim(text.substr(0, eol)) != kFormatTag)
    throw std::runtime_error(std::string("unsupported weight file: expected version tag ") +
                             kFormatTag);
  const io::KeyValueDoc doc = io::KeyValueDoc::parse(text.substr(eol + 1));

  ImportedNetwork imported;
  MlpNetwork& net = imported.net;
  const std::string sizes_text = doc.get("meta.layer_sizes");
  for (double v : io::parse_double_list(sizes_text)) {
    net.layer_sizes.push_back(static_cast<int>(v));
  }
  if (net.layer_sizes.size() < 2)
    throw std::runtime_error("weight file has fewer than two layers");
  net.hidden_activation = activation_from_string(doc.get("meta.hidden_activation"));
  net.output_activation = activation_from_string(doc.get("meta.output_activation"));
  for (const auto& [key, value] : doc.entries()) {
    if (key.starts_with("meta.") && key != "meta.layer_sizes" &&
        key != "meta.hidden_activation" && key != "meta.output_activation") {
      imported.meta.emplace(key.substr(5), value);
    }
  }

  const auto get_range = [&doc](const char* name) {
    return dataset::FeatureRange{doc.get_double("normalization." + std::string(name) + ".min"),
                                 doc.get_double("normalization." + std::string(name) + ".max")};
  };
  imported.norm.irradiance = get_range("irradiance");
  imported.norm.temperature = get_range("temperature");
  imported.norm.load = get_range("load");
  imported.norm.duty = get_range("duty");

  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    const std::string prefix = "layer " + std::to_string(l + 1) + ".";
    const int rows = static_cast<int>(doc.get_int(prefix + "rows"));
    const int cols = static_cast<int>(doc.get_int(prefix + "cols"));
    if (rows != net.layer_sizes[l + 1] || cols != net.layer_sizes[l])
      throw std::runtime_error("weight file layer " + std::to_string(l + 1) +
                               " shape disagrees with layer_sizes");
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
      const std::vector<double> row =
          io::parse_double_list(doc.get(prefix + "row." + std::to_string(r)));
      if (static_cast<int>(row.size()) != cols)
        throw std::runtime_error("weight file row length mismatch in layer " +
                                 std::to_string(l + 1));
      w.insert(w.end(), row.begin(), row.end());
    }
    std::vector<double> b = io::parse_double_list(doc.get(prefix + "bias"));
    if (static_cast<int>(b.size()) != rows)
      throw std::runtime_error("weight file bias length mismatch in layer " +
                               std::to_string(l + 1));
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  net.validate();
  return imported;
}

}  // namespace pvmppt::ann
