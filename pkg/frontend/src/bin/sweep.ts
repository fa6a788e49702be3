import { figureMain, reportFailure } from "../cli.js";

figureMain("sweep", process.argv.slice(2)).catch(reportFailure);
