#include "hasard/play/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace hasard::play {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
std::uint32_t get_u32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}
std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>((p[0] << 8) | p[1]); }

std::vector<std::uint8_t> with_header(Tag tag, std::span<const std::uint8_t> body) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + body.size());
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  out.push_back(static_cast<std::uint8_t>(tag));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

void append_number(std::string& s, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, ptr);
}

template <class T>
T number(std::string_view tok) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw std::invalid_argument("bad number in STATE line");
  return v;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> frame_body(std::uint32_t seq, int width, int height, std::span<const std::uint8_t> rgb) {
  if (width < 0 || height < 0 || width > 0xffff || height > 0xffff)
    throw std::invalid_argument("frame dimensions out of range");
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) throw std::invalid_argument("frame payload size");
  std::vector<std::uint8_t> body;
  body.reserve(8 + rgb.size());
  put_u32(body, seq);
  put_u16(body, static_cast<std::uint16_t>(width));
  put_u16(body, static_cast<std::uint16_t>(height));
  body.insert(body.end(), rgb.begin(), rgb.end());
  return body;
}

std::vector<std::uint8_t> encode_frame(std::uint32_t seq, int width, int height, std::span<const std::uint8_t> rgb) {
  return with_header(Tag::Frame, frame_body(seq, width, height, rgb));
}

std::string state_line(const StateMessage& s) {
  std::string out = "STATE ";
  out += std::to_string(s.step);
  out += ' ';
  append_number(out, s.reward_total);
  out += ' ';
  append_number(out, s.cost_total);
  out += ' ';
  append_number(out, s.budget);
  out += s.done ? " 1" : " 0";
  return out;
}

std::vector<std::uint8_t> encode_state(const StateMessage& s) {
  const std::string line = state_line(s);
  return with_header(Tag::State, {reinterpret_cast<const std::uint8_t*>(line.data()), line.size()});
}

FrameMessage decode_frame_body(std::span<const std::uint8_t> body) {
  if (body.size() < 8) throw std::invalid_argument("FRAME body too short");
  FrameMessage f;
  f.seq = get_u32(body.data());
  f.width = get_u16(body.data() + 4);
  f.height = get_u16(body.data() + 6);
  if (body.size() != 8 + static_cast<std::size_t>(f.width) * f.height * 3)
    throw std::invalid_argument("FRAME payload size does not match dimensions");
  f.rgb.assign(body.begin() + 8, body.end());
  return f;
}

StateMessage parse_state_line(std::string_view line) {
  const auto tok = split(line);
  if (tok.size() != 6 || tok[0] != "STATE") throw std::invalid_argument("malformed STATE line");
  StateMessage s;
  s.step = number<int>(tok[1]);
  s.reward_total = number<double>(tok[2]);
  s.cost_total = number<double>(tok[3]);
  s.budget = number<double>(tok[4]);
  if (tok[5] != "0" && tok[5] != "1") throw std::invalid_argument("STATE done flag must be 0 or 1");
  s.done = tok[5] == "1";
  return s;
}

std::pair<Tag, std::uint32_t> decode_header(std::span<const std::uint8_t, kHeaderBytes> header) {
  const std::uint8_t tag = header[4];
  if (tag != static_cast<std::uint8_t>(Tag::Frame) && tag != static_cast<std::uint8_t>(Tag::State))
    throw std::invalid_argument("unknown message tag");
  return {static_cast<Tag>(tag), get_u32(header.data())};
}

std::optional<ClientMessage> parse_client_line(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  const auto tok = split(line);
  if (tok.empty()) return std::nullopt;
  if (tok[0] == "RESET" && tok.size() == 1) return ResetCommand{};
  if (tok[0] == "STEP" && tok.size() == 1) return StepCommand{};
  if (tok[0] != "KEYS") return std::nullopt;
  KeysCommand k;
  for (std::size_t i = 1; i < tok.size(); ++i)
    if (const auto b = button_from_name(tok[i])) k.mask |= KeyMask{1} << static_cast<int>(*b);
  return k;
}

KeyMask mask_of(std::span<const Button> buttons) {
  KeyMask m = 0;
  for (Button b : buttons)
    if (b != Button::NoOp && b != Button::Count) m |= KeyMask{1} << static_cast<int>(b);
  return m;
}

std::vector<Button> buttons_of(KeyMask mask) {
  std::vector<Button> out;
  for (int i = 1; i < static_cast<int>(Button::Count); ++i)
    if (mask & (KeyMask{1} << i)) out.push_back(static_cast<Button>(i));
  return out;
}

std::string keys_line(std::span<const Button> buttons) {
  std::vector<std::string_view> names;
  for (Button b : buttons_of(mask_of(buttons))) names.push_back(button_name(b));
  std::sort(names.begin(), names.end());
  std::string out = "KEYS";
  for (auto n : names) {
    out += ' ';
    out += n;
  }
  return out;
}

}  // namespace hasard::play
