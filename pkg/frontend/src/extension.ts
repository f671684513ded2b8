/**
 * The "generate readme" command: collect workspace files, call the
 * service, preview the result, and save on request with an overwrite
 * guard.  One generation may be in flight per workspace at a time.
 */

import { LarchClient, ServiceError, ServiceUnreachable } from "./client.js";
import { buildUpload, selectUploadFiles } from "./core.js";
import { EditorHost } from "./editor.js";

const inFlight = new Set<string>();

export interface GenerateCommandResult {
  status: "previewed" | "rejected" | "failed";
  readme?: string;
  representativePath?: string;
}

export async function generateReadmeCommand(
  host: EditorHost,
  client: LarchClient,
): Promise<GenerateCommandResult> {
  const workspace = host.workspaceName();
  if (inFlight.has(workspace)) {
    host.notifyInfo("A readme generation is already running for this workspace.");
    return { status: "rejected" };
  }
  inFlight.add(workspace);
  try {
    const candidates = await host.listWorkspaceFiles();
    const files = selectUploadFiles(candidates, host.settings());
    const upload = buildUpload(workspace, files);

    host.showProgress(`Asking ${client.endpoint} for a readme draft...`);
    let response;
    try {
      response = await client.generate(upload);
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        host.notifyError(
          `Readme service is not reachable at ${err.endpoint}. ` +
            "Check the larch.endpoint setting and that the service is running.",
        );
      } else if (err instanceof ServiceError) {
        host.notifyError(
          `Readme service rejected the request (${err.body.code}): ${err.body.error}`,
        );
      } else {
        host.notifyError(`Readme generation failed: ${String(err)}`);
      }
      return { status: "failed" };
    }

    await host.showPreview(response.readme);
    return {
      status: "previewed",
      readme: response.readme,
      representativePath: response.representative_path,
    };
  } finally {
    inFlight.delete(workspace);
  }
}

/** "Save as README.md" action offered from the preview. */
export async function saveReadmeCommand(
  host: EditorHost,
  readme: string,
): Promise<boolean> {
  if (await host.fileExists("README.md")) {
    const overwrite = await host.confirm(
      "README.md already exists. Overwrite it with the generated draft?",
    );
    if (!overwrite) return false;
  }
  await host.writeFile("README.md", readme);
  host.notifyInfo("README.md written.");
  return true;
}

/** Test hook: forget any in-flight bookkeeping. */
export function resetInFlight(): void {
  inFlight.clear();
}
