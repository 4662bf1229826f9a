// Copyright 2026 The vtb Authors
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

#include "core/media.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include <opencv2/imgproc.hpp>
#include <opencv2/videoio.hpp>

#include "core/error.hpp"
#include "core/synthetic_video.hpp"

namespace vtb {

namespace fs = std::filesystem;

std::shared_ptr<const SyntheticVideo> SyntheticMedia::load(const fs::path& video) {
  std::lock_guard lock(mu_);
  auto key = fs::absolute(video).string();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (!fs::exists(video)) throw IoError("video not found: " + video.string());
  auto v = std::make_shared<const SyntheticVideo>(load_synthetic_video(video));
  cache_[key] = v;
  return v;
}

double SyntheticMedia::probe_duration(const fs::path& video) { return load(video)->duration_s; }

AudioInfo SyntheticMedia::extract_audio(const fs::path& video, const fs::path& out) {
  auto v = load(video);
  AudioInfo info;
  if (!v->has_audio) return info;
  write_wav(out, v->audio_samples(), kAudioSampleRate);
  info.path = out;
  info.has_audio = true;
  info.duration_s = wav_duration(out);
  return info;
}

GrayImage SyntheticMedia::frame_at(const fs::path& video, double t) {
  auto v = load(video);
  if (t < 0 || t > v->duration_s + 1e-9)
    throw IoError("timestamp " + std::to_string(t) + " outside " + video.string());
  return v->render(t);
}

namespace {

struct ProcessResult {
  int exit_code = -1;
  std::string diagnostics;
};

// Runs argv without a shell, capturing stderr.
ProcessResult run_process(const std::vector<std::string>& argv) {
  int pipefd[2];
  if (pipe(pipefd) != 0) return {-1, "pipe() failed"};
  pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    return {-1, "fork() failed"};
  }
  if (pid == 0) {
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    if (FILE* devnull = std::fopen("/dev/null", "w")) dup2(fileno(devnull), STDOUT_FILENO);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    std::fprintf(stderr, "cannot execute %s\n", args[0]);
    _exit(127);
  }
  close(pipefd[1]);
  ProcessResult r;
  char buf[4096];
  ssize_t n;
  while ((n = read(pipefd[0], buf, sizeof buf)) > 0) {
    if (r.diagnostics.size() < 64 * 1024) r.diagnostics.append(buf, static_cast<std::size_t>(n));
  }
  close(pipefd[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

std::string tail(const std::string& s, std::size_t n = 600) {
  return s.size() <= n ? s : s.substr(s.size() - n);
}

}  // namespace

double ExternalMedia::probe_duration(const fs::path& video) {
  cv::VideoCapture cap(video.string());
  if (!cap.isOpened()) throw IoError("cannot open video: " + video.string());
  const double fps = cap.get(cv::CAP_PROP_FPS);
  const double frames = cap.get(cv::CAP_PROP_FRAME_COUNT);
  if (!(fps > 0) || !(frames > 0)) throw IoError("cannot probe duration: " + video.string());
  return frames / fps;
}

AudioInfo ExternalMedia::extract_audio(const fs::path& video, const fs::path& out) {
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  auto r = run_process({ffmpeg_, "-nostdin", "-hide_banner", "-loglevel", "error", "-y", "-i",
                        video.string(), "-vn", "-ac", "1", "-ar", "16000", "-c:a", "pcm_s16le",
                        "-f", "wav", out.string()});
  AudioInfo info;
  if (r.exit_code != 0) {
    if (r.diagnostics.find("does not contain any stream") != std::string::npos ||
        r.diagnostics.find("Output file is empty") != std::string::npos) {
      return info;  // no audio track
    }
    throw StageError("ffmpeg exited with " + std::to_string(r.exit_code) + " for " +
                     video.string() + ": " + tail(r.diagnostics));
  }
  info.path = out;
  info.has_audio = true;
  info.duration_s = wav_duration(out);
  return info;
}

GrayImage ExternalMedia::frame_at(const fs::path& video, double t) {
  std::lock_guard lock(mu_);
  cv::VideoCapture cap(video.string());
  if (!cap.isOpened()) throw IoError("cannot open video: " + video.string());
  cap.set(cv::CAP_PROP_POS_MSEC, t * 1000.0);
  cv::Mat frame;
  if (!cap.read(frame) || frame.empty())
    throw IoError("cannot decode frame at " + std::to_string(t) + "s of " + video.string());
  cv::Mat gray;
  if (frame.channels() == 1) {
    gray = frame;
  } else {
    cv::cvtColor(frame, gray, cv::COLOR_BGR2GRAY);
  }
  GrayImage img(gray.cols, gray.rows);
  for (int y = 0; y < gray.rows; ++y) {
    const auto* row = gray.ptr<std::uint8_t>(y);
    std::copy(row, row + gray.cols, img.pixels.begin() + static_cast<std::ptrdiff_t>(y) * gray.cols);
  }
  return img;
}

std::string ExternalMedia::diagnose() {
  auto r = run_process({ffmpeg_, "-hide_banner", "-version"});
  if (r.exit_code != 0) return "media toolkit '" + ffmpeg_ + "' not runnable (exit " +
                               std::to_string(r.exit_code) + ")";
  return {};
}

MediaToolkit& CompositeMedia::pick(const fs::path& video) {
  if (is_synthetic_video(video)) return synthetic_;
  return external_;
}

double CompositeMedia::probe_duration(const fs::path& video) {
  return pick(video).probe_duration(video);
}

AudioInfo CompositeMedia::extract_audio(const fs::path& video, const fs::path& out) {
  return pick(video).extract_audio(video, out);
}

GrayImage CompositeMedia::frame_at(const fs::path& video, double t) {
  return pick(video).frame_at(video, t);
}

}  // namespace vtb
