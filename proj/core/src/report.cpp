#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "tampforge/suite.hpp"

namespace tampforge {

namespace fs = std::filesystem;

namespace {

std::string percent(double rate) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << rate * 100.0 << "%";
  return out.str();
}

const SuiteCell* find_cell(const std::map<std::string, SuiteCell>& cells,
                           const std::string& key) {
  const auto it = cells.find(key);
  return it == cells.end() ? nullptr : &it->second;
}

// Minimal polyline chart; one series per entry of `series`.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<std::string>& x_labels,
                     const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  constexpr int kW = 640, kH = 420, kMargin = 60;
  const int plot_w = kW - 2 * kMargin;
  const int plot_h = kH - 2 * kMargin;
  constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - kMargin
      << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const int y = kH - kMargin - static_cast<int>(frac * plot_h);
    out << "<text x=\"" << kMargin - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << percent(frac) << "</text>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << y << "\" x2=\"" << kW - kMargin
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
  }
  const auto x_at = [&](size_t i) {
    if (x_labels.size() <= 1) return kMargin + plot_w / 2;
    return kMargin + static_cast<int>(i * plot_w / (x_labels.size() - 1));
  };
  for (size_t i = 0; i < x_labels.size(); ++i) {
    out << "<text x=\"" << x_at(i) << "\" y=\"" << kH - kMargin + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << x_labels[i] << "</text>\n";
  }
  size_t color = 0;
  int legend_y = kMargin;
  for (const auto& [name, values] : series) {
    const char* stroke = kColors[color % std::size(kColors)];
    std::ostringstream points;
    for (size_t i = 0; i < values.size() && i < x_labels.size(); ++i) {
      const int y = kH - kMargin - static_cast<int>(values[i] * plot_h);
      points << x_at(i) << "," << y << " ";
    }
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\""
        << points.str() << "\"/>\n";
    out << "<text x=\"" << kW - kMargin + 4 << "\" y=\"" << legend_y
        << "\" font-size=\"10\" fill=\"" << stroke << "\">" << name << "</text>\n";
    legend_y += 14;
    ++color;
  }
  out << "</svg>\n";
}

}  // namespace

void write_report(const std::string& records_path, const std::string& out_dir) {
  const std::vector<EpisodeRecord> records = load_records(records_path);
  const SuiteSummary summary = summarize_records(records);
  fs::create_directories(out_dir);
  const fs::path out(out_dir);

  // Tasks and methods actually present, in canonical order.
  std::vector<EnvKind> tasks;
  std::vector<Method> methods;
  for (const EnvKind task : kAllEnvKinds) {
    for (const Method method : kAllMethods) {
      const std::string key =
          std::string(to_string(task)) + "|" + std::string(to_string(method));
      if (summary.by_task_method.count(key)) {
        if (std::find(tasks.begin(), tasks.end(), task) == tasks.end()) tasks.push_back(task);
        if (std::find(methods.begin(), methods.end(), method) == methods.end()) {
          methods.push_back(method);
        }
      }
    }
  }

  {
    std::ofstream json_out(out / "summary.json");
    json_out << summary_to_json(summary).dump(2) << "\n";
  }

  // Success-rate table, tasks as rows and methods as columns.
  {
    std::ofstream table(out / "table.txt");
    table << std::left << std::setw(18) << "Success";
    for (const Method method : methods) table << std::setw(24) << to_string(method);
    table << "\n";
    std::map<Method, std::pair<double, int>> averages;
    for (const EnvKind task : tasks) {
      table << std::setw(18) << to_string(task);
      for (const Method method : methods) {
        const auto* cell = find_cell(summary.by_task_method,
                                     std::string(to_string(task)) + "|" +
                                         std::string(to_string(method)));
        table << std::setw(24) << (cell ? percent(cell->success_rate()) : "-");
        if (cell) {
          averages[method].first += cell->success_rate();
          averages[method].second += 1;
        }
      }
      table << "\n";
    }
    table << std::setw(18) << "Average";
    for (const Method method : methods) {
      const auto& [total, count] = averages[method];
      table << std::setw(24) << (count ? percent(total / count) : "-");
    }
    table << "\n";
  }

  {
    std::ofstream csv(out / "per_task_method.csv");
    csv << "task,method,samples,successes,success_rate,mean_rounds,mean_wall_clock_s\n";
    for (const auto& [key, cell] : summary.by_task_method) {
      const size_t bar = key.find('|');
      csv << key.substr(0, bar) << "," << key.substr(bar + 1) << "," << cell.samples << ","
          << cell.successes << "," << cell.success_rate() << "," << cell.mean_rounds()
          << "," << cell.mean_wall_clock() << "\n";
    }
  }

  {
    std::ofstream csv(out / "failures.csv");
    csv << "task,method,reason,count\n";
    for (const auto& [key, cell] : summary.by_task_method) {
      const size_t bar = key.find('|');
      for (const auto& [reason, count] : cell.failure_histogram) {
        csv << key.substr(0, bar) << "," << key.substr(bar + 1) << "," << reason << ","
            << count << "\n";
      }
    }
  }

  // Difficulty sweep (success rate vs level), CSV plus chart.
  {
    std::ofstream csv(out / "difficulty_sweep.csv");
    csv << "task,method,level,samples,success_rate\n";
    for (const auto& [key, cell] : summary.by_task_method_level) {
      const size_t bar1 = key.find('|');
      const size_t bar2 = key.find('|', bar1 + 1);
      csv << key.substr(0, bar1) << "," << key.substr(bar1 + 1, bar2 - bar1 - 1) << ","
          << key.substr(bar2 + 2) << "," << cell.samples << "," << cell.success_rate()
          << "\n";
    }

    std::vector<std::string> x_labels;
    for (int level = 0; level < kDifficultyLevels; ++level) {
      x_labels.push_back("L" + std::to_string(level));
    }
    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (const Method method : methods) {
      std::vector<double> values;
      for (int level = 0; level < kDifficultyLevels; ++level) {
        double total = 0.0;
        int count = 0;
        for (const EnvKind task : tasks) {
          const auto* cell = find_cell(
              summary.by_task_method_level,
              std::string(to_string(task)) + "|" + std::string(to_string(method)) + "|L" +
                  std::to_string(level));
          if (cell && cell->samples > 0) {
            total += cell->success_rate();
            ++count;
          }
        }
        values.push_back(count ? total / count : 0.0);
      }
      series.emplace_back(std::string(to_string(method)), std::move(values));
    }
    write_svg_chart((out / "difficulty_sweep.svg").string(),
                    "Success rate vs task complexity", x_labels, series);
  }

  // Round sweep for the multi-round method, CSV plus chart.
  {
    std::ofstream csv(out / "round_sweep.csv");
    csv << "task,max_rounds,samples,success_rate\n";
    std::set<int> caps;
    for (const auto& [key, cell] : summary.by_task_rounds) {
      const size_t bar = key.find('|');
      const int cap = std::stoi(key.substr(bar + 2));
      caps.insert(cap);
      csv << key.substr(0, bar) << "," << cap << "," << cell.samples << ","
          << cell.success_rate() << "\n";
    }

    std::vector<std::string> x_labels;
    for (const int cap : caps) x_labels.push_back(std::to_string(cap));
    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (const EnvKind task : tasks) {
      std::vector<double> values;
      bool any = false;
      for (const int cap : caps) {
        const auto* cell =
            find_cell(summary.by_task_rounds,
                      std::string(to_string(task)) + "|R" + std::to_string(cap));
        values.push_back(cell ? cell->success_rate() : 0.0);
        any = any || cell;
      }
      if (any) series.emplace_back(std::string(to_string(task)), std::move(values));
    }
    write_svg_chart((out / "round_sweep.svg").string(),
                    "Success rate vs maximum rounds", x_labels, series);
  }
}

}  // namespace tampforge
