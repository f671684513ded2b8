import { beforeEach, describe, expect, it } from "vitest";

import { FetchLike, LarchClient } from "../src/client.js";
import { ClientSettings, DEFAULT_SETTINGS } from "../src/core.js";
import { EditorHost, WorkspaceFile } from "../src/editor.js";
import {
  generateReadmeCommand,
  resetInFlight,
  saveReadmeCommand,
} from "../src/extension.js";

class FakeHost implements EditorHost {
  files: WorkspaceFile[] = [];
  existing = new Map<string, string>();
  previews: string[] = [];
  errors: string[] = [];
  infos: string[] = [];
  progress: string[] = [];
  confirmAnswer = false;
  confirmQuestions: string[] = [];
  name = "demo-workspace";
  config: ClientSettings = { ...DEFAULT_SETTINGS };

  workspaceName(): string {
    return this.name;
  }
  async listWorkspaceFiles(): Promise<WorkspaceFile[]> {
    return this.files;
  }
  settings(): ClientSettings {
    return this.config;
  }
  showProgress(message: string): void {
    this.progress.push(message);
  }
  async showPreview(markdown: string): Promise<void> {
    this.previews.push(markdown);
  }
  async confirm(question: string): Promise<boolean> {
    this.confirmQuestions.push(question);
    return this.confirmAnswer;
  }
  notifyError(message: string): void {
    this.errors.push(message);
  }
  notifyInfo(message: string): void {
    this.infos.push(message);
  }
  async fileExists(relativePath: string): Promise<boolean> {
    return this.existing.has(relativePath);
  }
  async writeFile(relativePath: string, content: string): Promise<void> {
    this.existing.set(relativePath, content);
  }
}

const GENERATE_OK = JSON.stringify({
  readme: "# demo\n",
  representative_path: "cli.py",
  prompt_tokens: 10,
  truncated: false,
});

function okFetch(calls: { body?: string }[] = []): FetchLike {
  return async (_url, init) => {
    calls.push({ body: init.body });
    return { ok: true, status: 200, text: async () => GENERATE_OK };
  };
}

beforeEach(() => {
  resetInFlight();
});

describe("generateReadmeCommand", () => {
  it("previews the generated readme from a mocked service", async () => {
    const host = new FakeHost();
    host.files = [{ path: "cli.py", content: "print(1)\n" }];
    const client = new LarchClient("http://localhost:8000", okFetch());

    const result = await generateReadmeCommand(host, client);

    expect(result.status).toBe("previewed");
    expect(result.readme).toBe("# demo\n");
    expect(result.representativePath).toBe("cli.py");
    expect(host.previews).toEqual(["# demo\n"]);
    expect(host.errors).toEqual([]);
    expect(host.progress.length).toBe(1);
  });

  it("uploads the workspace name and only the admitted files", async () => {
    const calls: { body?: string }[] = [];
    const host = new FakeHost();
    host.name = "my-project";
    host.config = { ...DEFAULT_SETTINGS, ignoreGlobs: ["*.lock"] };
    host.files = [
      { path: "cli.py", content: "print(1)\n" },
      { path: ".git/config", content: "[core]\n" },
      { path: "poetry.lock", content: "locks\n" },
    ];
    const client = new LarchClient("http://localhost:8000", okFetch(calls));

    await generateReadmeCommand(host, client);

    const body = JSON.parse(calls[0]!.body!) as {
      project_name: string;
      files: { path: string }[];
    };
    expect(body.project_name).toBe("my-project");
    expect(body.files.map((f) => f.path)).toEqual(["cli.py"]);
  });

  it("notifies with the endpoint when the service is down and opens nothing", async () => {
    const host = new FakeHost();
    host.files = [{ path: "cli.py", content: "x\n" }];
    const failing: FetchLike = async () => {
      throw new Error("connect ECONNREFUSED 127.0.0.1:8000");
    };
    const client = new LarchClient("http://localhost:8000", failing);

    const result = await generateReadmeCommand(host, client);

    expect(result.status).toBe("failed");
    expect(host.previews).toEqual([]);
    expect(host.errors).toHaveLength(1);
    expect(host.errors[0]).toContain("http://localhost:8000");
    expect(host.errors[0]).toContain("larch.endpoint");
  });

  it("surfaces the service's error body on a 4xx", async () => {
    const host = new FakeHost();
    host.files = [{ path: "notes.txt", content: "no python\n" }];
    const fetch: FetchLike = async () => ({
      ok: false,
      status: 400,
      text: async () =>
        '{"error":"no Python files in the upload","code":"NO_PYTHON_FILES"}',
    });
    const client = new LarchClient("http://localhost:8000", fetch);

    const result = await generateReadmeCommand(host, client);

    expect(result.status).toBe("failed");
    expect(host.errors[0]).toContain("NO_PYTHON_FILES");
    expect(host.errors[0]).toContain("no Python files in the upload");
  });

  it("rejects a second invocation while one is in flight", async () => {
    const host = new FakeHost();
    host.files = [{ path: "cli.py", content: "x\n" }];
    let release!: () => void;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const slowFetch: FetchLike = async () => {
      await gate;
      return { ok: true, status: 200, text: async () => GENERATE_OK };
    };
    const client = new LarchClient("http://localhost:8000", slowFetch);

    const first = generateReadmeCommand(host, client);
    const second = await generateReadmeCommand(host, client);
    expect(second.status).toBe("rejected");
    expect(host.infos.some((m) => m.includes("already running"))).toBe(true);

    release();
    const firstResult = await first;
    expect(firstResult.status).toBe("previewed");

    // After completion the workspace is free again.
    const third = await generateReadmeCommand(host, client);
    expect(third.status).toBe("previewed");
  });
});

describe("saveReadmeCommand", () => {
  it("writes directly when no readme exists", async () => {
    const host = new FakeHost();
    const saved = await saveReadmeCommand(host, "# fresh\n");
    expect(saved).toBe(true);
    expect(host.confirmQuestions).toEqual([]);
    expect(host.existing.get("README.md")).toBe("# fresh\n");
  });

  it("asks before overwriting and honors a refusal", async () => {
    const host = new FakeHost();
    host.existing.set("README.md", "# original\n");
    host.confirmAnswer = false;

    const saved = await saveReadmeCommand(host, "# draft\n");

    expect(saved).toBe(false);
    expect(host.confirmQuestions).toHaveLength(1);
    expect(host.confirmQuestions[0]).toContain("Overwrite");
    expect(host.existing.get("README.md")).toBe("# original\n");
  });

  it("overwrites after an explicit yes", async () => {
    const host = new FakeHost();
    host.existing.set("README.md", "# original\n");
    host.confirmAnswer = true;

    const saved = await saveReadmeCommand(host, "# draft\n");

    expect(saved).toBe(true);
    expect(host.existing.get("README.md")).toBe("# draft\n");
  });
});
