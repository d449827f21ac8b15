#include "fklab/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fklab/errors.hpp"

namespace fklab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::string method_key(const SweepRow& row) {
    std::ostringstream os;
    os << source_name(row.method.source) << '|' << row.method.delta << '|'
       << (row.method.source == Source::mc ? integrator_name(row.method.integrator) : "");
    return os.str();
}

std::vector<const SweepRow*> sorted_rows(const SweepResult& result) {
    std::vector<const SweepRow*> rows;
    rows.reserve(result.rows.size());
    for (const auto& r : result.rows)
        rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow* a, const SweepRow* b) {
        const auto ka = std::make_tuple(std::string(source_name(a->method.source)),
                                        a->method.delta,
                                        std::string(target_name(a->target)));
        const auto kb = std::make_tuple(std::string(source_name(b->method.source)),
                                        b->method.delta,
                                        std::string(target_name(b->target)));
        if (ka != kb)
            return ka < kb;
        return a->dt > b->dt; // dt descending inside a group
    });
    return rows;
}

} // namespace

void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw config_error("emit_csv: cannot open " + path + " for writing");
    out << "method,delta,integrator,dt,target,value,reference,error,stderr,order_fit,r2\n";
    for (const SweepRow* row : sorted_rows(result)) {
        out << source_name(row->method.source) << ',' << format_double(row->method.delta) << ','
            << (row->method.source == Source::mc ? integrator_name(row->method.integrator) : "")
            << ',' << format_double(row->dt) << ',' << target_name(row->target) << ','
            << cell(row->value) << ',' << cell(row->reference) << ',' << cell(row->error) << ','
            << cell(row->stderr_) << ',' << cell(row->order_fit) << ',' << cell(row->r2) << '\n';
    }
    if (!out)
        throw config_error("emit_csv: write failure on " + path);
}

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points; // (dt, error)
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

} // namespace

bool emit_svg_loglog(const SweepResult& result, const std::string& path) {
    std::map<std::string, Series> series;
    for (const auto& row : result.rows) {
        if (!std::isfinite(row.error) || row.error <= 0.0)
            continue;
        const std::string key = method_key(row) + "|" + std::string(target_name(row.target));
        Series& s = series[key];
        if (s.label.empty()) {
            std::ostringstream label;
            label << source_name(row.method.source) << " delta=" << row.method.delta << " "
                  << target_name(row.target);
            if (std::isfinite(row.order_fit)) {
                label << " (order " << static_cast<int>(std::round(row.order_fit * 100)) / 100.0
                      << ")";
            }
            s.label = label.str();
        }
        s.points.emplace_back(row.dt, row.error);
    }
    if (series.empty())
        return false;

    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool first = true;
    int distinct_dt = 0;
    {
        std::vector<double> dts;
        for (auto& [key, s] : series) {
            std::sort(s.points.begin(), s.points.end());
            for (const auto& [dt, err] : s.points) {
                const double x = std::log10(dt);
                const double y = std::log10(err);
                if (first) {
                    min_x = max_x = x;
                    min_y = max_y = y;
                    first = false;
                } else {
                    min_x = std::min(min_x, x);
                    max_x = std::max(max_x, x);
                    min_y = std::min(min_y, y);
                    max_y = std::max(max_y, y);
                }
                dts.push_back(dt);
            }
        }
        std::sort(dts.begin(), dts.end());
        dts.erase(std::unique(dts.begin(), dts.end()), dts.end());
        distinct_dt = static_cast<int>(dts.size());
    }

    // anchor the dashed reference slopes at the largest dt and the largest
    // error recorded there
    double anchor_x = max_x;
    double anchor_y = min_y;
    for (const auto& [key, s] : series)
        for (const auto& [dt, err] : s.points)
            if (std::log10(dt) == max_x)
                anchor_y = std::max(anchor_y, std::log10(err));

    if (distinct_dt > 1) {
        // reference lines extend to the smallest dt; include them in bounds
        min_y = std::min(min_y, anchor_y - 2.0 * (anchor_x - min_x));
    }
    const double pad_x = 0.05 * std::max(1e-3, max_x - min_x);
    const double pad_y = 0.05 * std::max(1e-3, max_y - min_y);
    min_x -= pad_x;
    max_x += pad_x;
    min_y -= pad_y;
    max_y += pad_y;

    const double width = 720.0, height = 480.0;
    const double ml = 70.0, mr = 180.0, mt = 20.0, mb = 50.0;
    auto sx = [&](double x) { return ml + (x - min_x) / (max_x - min_x) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - (y - min_y) / (max_y - min_y) * (height - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (width - ml - mr)
        << "\" height=\"" << (height - mt - mb)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // decade ticks
    for (int e = static_cast<int>(std::floor(min_x)); e <= static_cast<int>(std::ceil(max_x)); ++e) {
        const double x = sx(e);
        if (x < ml || x > width - mr)
            continue;
        svg << "<line x1=\"" << x << "\" y1=\"" << (height - mb) << "\" x2=\"" << x << "\" y2=\""
            << (height - mb + 6) << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << (height - mb + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
    for (int e = static_cast<int>(std::floor(min_y)); e <= static_cast<int>(std::ceil(max_y)); ++e) {
        const double y = sy(e);
        if (y < mt || y > height - mb)
            continue;
        svg << "<line x1=\"" << (ml - 6) << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
            << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << (ml - 10) << "\" y=\"" << (y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    svg << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"" << (height - 10)
        << "\" font-size=\"13\" text-anchor=\"middle\">dt</text>\n";
    svg << "<text x=\"18\" y=\"" << (mt + (height - mt - mb) / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (mt + (height - mt - mb) / 2) << ")\">error</text>\n";

    if (distinct_dt > 1) {
        for (int slope = 1; slope <= 2; ++slope) {
            const double x0 = anchor_x, y0 = anchor_y;
            const double x1 = min_x + pad_x, y1 = anchor_y - slope * (anchor_x - x1);
            svg << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(y0) << "\" x2=\"" << sx(x1)
                << "\" y2=\"" << sy(y1)
                << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\" stroke-width=\"1\"/>\n";
            svg << "<text x=\"" << (sx(x1) + 4) << "\" y=\"" << (sy(y1) - 4)
                << "\" font-size=\"11\" fill=\"#888888\">slope " << slope << "</text>\n";
        }
    }

    int color_idx = 0;
    double legend_y = mt + 16;
    for (const auto& [key, s] : series) {
        const char* color = kPalette[color_idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (s.points.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [dt, err] : s.points)
                svg << sx(std::log10(dt)) << "," << sy(std::log10(err)) << " ";
            svg << "\"/>\n";
        }
        for (const auto& [dt, err] : s.points)
            svg << "<circle cx=\"" << sx(std::log10(dt)) << "\" cy=\"" << sy(std::log10(err))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        svg << "<line x1=\"" << (width - mr + 10) << "\" y1=\"" << legend_y << "\" x2=\""
            << (width - mr + 30) << "\" y2=\"" << legend_y << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << (width - mr + 35) << "\" y=\"" << (legend_y + 4)
            << "\" font-size=\"11\">" << s.label << "</text>\n";
        legend_y += 18;
        ++color_idx;
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw config_error("emit_svg_loglog: cannot open " + path + " for writing");
    out << svg.str();
    if (!out)
        throw config_error("emit_svg_loglog: write failure on " + path);
    return true;
}

} // namespace fklab
